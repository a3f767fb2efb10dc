#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wwl/common.hpp"

namespace wwl {

/// Finite metric measure space: a point set with pairwise distances and
/// positive per-point weights. Distances are held as a full symmetric matrix
/// up to kDenseCap points and as an on-demand oracle above that.
///
/// All balls in this library are open: B(x, r) = { y : d(x, y) < r }.
class MetricMeasureSpace {
 public:
  using DistanceFn = std::function<double(int, int)>;

  static constexpr int kDenseCap = 4096;

  /// Full square distance matrix; validated for symmetry, zero diagonal and
  /// non-negativity. Measure entries must be strictly positive.
  static MetricMeasureSpace from_matrix(Eigen::MatrixXd distances,
                                        Eigen::VectorXd measure,
                                        std::string label);

  /// Row-major strict lower triangle d(i,j), j < i; n(n-1)/2 entries.
  static MetricMeasureSpace from_lower_triangle(const std::vector<double>& tri,
                                                Eigen::VectorXd measure,
                                                std::string label);

  /// Distance oracle; materialized into a matrix when n <= materialize_cap.
  static MetricMeasureSpace from_oracle(int n, DistanceFn fn,
                                        Eigen::VectorXd measure,
                                        std::string label,
                                        int materialize_cap = kDenseCap);

  int point_count() const { return n_; }

  double distance(int i, int j) const {
    check_index(i);
    check_index(j);
    return matrix_ ? (*matrix_)(i, j) : oracle_(i, j);
  }

  double mu(int i) const {
    check_index(i);
    return measure_[i];
  }

  const Eigen::VectorXd& measure() const { return measure_; }
  double total_measure() const { return total_measure_; }
  double diameter() const { return diameter_; }
  const std::string& label() const { return label_; }
  bool has_matrix() const { return matrix_.has_value(); }

  /// Smallest nonzero pairwise distance (0 for a single point).
  double min_positive_distance() const;

  /// Sampling resolution: max over points of the nearest-neighbor distance.
  double mesh_norm() const;

 private:
  MetricMeasureSpace() = default;
  void finalize();
  void check_index(int i) const {
    if (i < 0 || i >= n_)
      throw std::out_of_range("point index " + std::to_string(i) +
                              " out of range [0," + std::to_string(n_) + ")");
  }

  int n_ = 0;
  std::optional<Eigen::MatrixXd> matrix_;
  DistanceFn oracle_;
  Eigen::VectorXd measure_;
  double total_measure_ = 0.0;
  double diameter_ = 0.0;
  std::string label_;
  mutable double min_positive_ = -1.0;  // lazy
  mutable double mesh_norm_ = -1.0;     // lazy
};

/// Open metric ball with its member indices and mu-volume.
struct Ball {
  int center = 0;
  double radius = 0.0;
  std::vector<int> members;  // ascending indices with d(center, .) < radius
  double volume = 0.0;       // sum of mu over members
};

Ball ball(const MetricMeasureSpace& space, int center, double radius);

/// Measured doubling exponent: max over centers x and grid radii r of
/// log2(|B(x,2r)| / |B(x,r)|).
struct DoublingEstimate {
  double exponent = 0.0;
  int witness_center = 0;
  double witness_radius = 0.0;
  std::vector<double> radius_grid;
};

DoublingEstimate doubling_estimate(const MetricMeasureSpace& space,
                                   const std::vector<double>& radius_grid);

/// Log-spaced grid between twice the minimum positive pairwise distance and
/// diameter/2. Below the lower cutoff discreteness makes |B(x,r)| = mu_x and
/// the ratios spike artificially.
std::vector<double> doubling_default_grid(const MetricMeasureSpace& space,
                                          int count = 12);

/// Randomized audit of the three volume-comparison consequences of doubling:
///   growth:   |B(x, p*r)| <= (2p)^D |B(x, r)|      for p > 1
///   transfer: |B(x, r)| <= 2^D (1 + d(x,y)/r)^D |B(y, r)|
///   reverse:  |B(x, r/2)| >= 10^-D |B(y, r/2)|     whenever d(x,y) <= 2r
struct BallComparisonReport {
  long samples = 0;
  long violations_growth = 0;
  long violations_transfer = 0;
  long violations_reverse = 0;
  double worst_slack = 0.0;  // max LHS/RHS over all sampled inequalities
};

BallComparisonReport check_ball_comparisons(const MetricMeasureSpace& space,
                                            double doubling_exponent,
                                            long samples,
                                            std::uint64_t seed = 1);

struct TriangleCheck {
  long checked = 0;
  long violations = 0;
  std::array<int, 3> witness = {0, 0, 0};
  double worst_excess = 0.0;  // max of d(i,k) - d(i,j) - d(j,k)
};

/// Samples random triples (or all of them when exhaustive) and reports
/// triangle-inequality violations beyond a small floating-point allowance.
TriangleCheck check_triangle_inequality(const MetricMeasureSpace& space,
                                        long samples, std::uint64_t seed = 1,
                                        bool exhaustive = false);

}  // namespace wwl
