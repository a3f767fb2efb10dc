#pragma once

#include <Eigen/Dense>

#include <memory>
#include <tuple>
#include <vector>

#include "wwl/space.hpp"

namespace wwl {

/// Measure-symmetric operator (L f)_i = (1/mu_i) sum_j w_ij (f_i - f_j) with
/// symmetric sparse conductances. Symmetry in the mu-inner product,
/// non-negativity of the quadratic form and L1 = 0 hold by construction.
///
/// Conductances are non-negative for graph Laplacians; operators assembled
/// from squared difference operators (sub-Laplacians) may carry signed
/// off-diagonal entries, flagged by nonnegative_weights().
class DirichletOperator {
 public:
  struct Edge {
    int i = 0, j = 0;
    double w = 0.0;
  };

  /// Build from undirected edges (i < j preferred, duplicates accumulate).
  static DirichletOperator from_edges(
      std::shared_ptr<const MetricMeasureSpace> space,
      const std::vector<Edge>& edges, bool require_nonnegative = true);

  /// Build from a symmetric matrix with zero row sums (w_ij = -B_ij off the
  /// diagonal). Using the row-sum convention keeps L1 = 0 exact.
  static DirichletOperator from_form_matrix(
      std::shared_ptr<const MetricMeasureSpace> space, const Eigen::MatrixXd& B,
      double prune_rel = 1e-14);

  const MetricMeasureSpace& space() const { return *space_; }
  std::shared_ptr<const MetricMeasureSpace> space_ptr() const { return space_; }
  bool nonnegative_weights() const { return nonneg_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }  // i < j

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

  /// Carre du champ by the operator formula (f Lg + g Lf - L(fg)) / 2,
  /// the squared-gradient form for a non-negative L.
  Eigen::VectorXd gamma(const Eigen::VectorXd& f,
                        const Eigen::VectorXd& g) const;

  /// Same bilinear form by the edge sum (1/2 mu_i) sum_j w_ij (f_i-f_j)(g_i-g_j);
  /// agrees with gamma() to machine precision and serves as its oracle.
  Eigen::VectorXd gamma_edge(const Eigen::VectorXd& f,
                             const Eigen::VectorXd& g) const;

  /// Dirichlet energy (1/2) sum_ij w_ij (f_i - f_j)^2 = <Lf, f>_mu.
  double energy_edge(const Eigen::VectorXd& f) const;

  double mu_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;
  double mu_norm(const Eigen::VectorXd& f) const;

  /// Dense form matrix B with L = diag(mu)^-1 B.
  Eigen::MatrixXd form_matrix() const;

 private:
  std::shared_ptr<const MetricMeasureSpace> space_;
  std::vector<Edge> edges_;              // canonical i < j
  std::vector<int> row_ptr_, col_;       // CSR over both directions
  std::vector<double> w_;
  Eigen::VectorXd degree_;               // sum_j w_ij
  bool nonneg_ = true;

  void build_csr();
  void check_fn(const Eigen::VectorXd& f) const;
};

struct GradientBoundReport {
  double c_measured = 0.0;  // max over trials of int Gamma(f,f) dmu / <Lf,f>_mu
  int trials = 0;
  int skipped = 0;          // trials with vanishing energy (kernel of L)
};

/// Random-trial audit of the gradient bound; the ratio is identically 1 for
/// these operators, so c_measured should match 1 to near machine precision.
GradientBoundReport check_gradient_bound(const DirichletOperator& op,
                                         int trials = 100,
                                         std::uint64_t seed = 1);

struct PoincareResult {
  double constant = 0.0;   // C_B = 1 / (rho^2 lambda1)
  double lambda1 = 0.0;    // smallest nonzero eigenvalue of the restricted form
  int ball_size = 0;
  bool disconnected = false;  // restricted subgraph not connected -> C_B = inf
};

/// Local Poincare constant of an open ball: the Neumann-type form keeps only
/// edges with both endpoints inside the ball, so boundary-straddling edges are
/// dropped (this can only increase the constant).
PoincareResult poincare_constant(const DirichletOperator& op, const Ball& b);

struct PoincareProfile {
  double rho = 0.0;
  std::vector<double> per_ball;   // +inf where the ball subgraph disconnects
  double sup_constant = 0.0;      // max over balls with finite constant
  int disconnected_count = 0;
};

PoincareProfile poincare_profile(const DirichletOperator& op, double rho,
                                 int threads = 1);

}  // namespace wwl
