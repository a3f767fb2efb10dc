#include "wwl/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace wwl {

namespace {
constexpr double kSymTol = 1e-12;
}

MetricMeasureSpace MetricMeasureSpace::from_matrix(Eigen::MatrixXd distances,
                                                   Eigen::VectorXd measure,
                                                   std::string label) {
  const int n = static_cast<int>(distances.rows());
  if (distances.cols() != n)
    throw ValidationError("distance matrix must be square");
  if (measure.size() != n)
    throw ValidationError("measure length does not match point count");
  for (int i = 0; i < n; ++i) {
    if (!(measure[i] > 0.0))
      throw ValidationError("measure must be positive at index " +
                            std::to_string(i));
    if (std::abs(distances(i, i)) > kSymTol)
      throw ValidationError("nonzero diagonal distance at index " +
                            std::to_string(i));
    distances(i, i) = 0.0;
    for (int j = 0; j < i; ++j) {
      const double a = distances(i, j), b = distances(j, i);
      if (!(a >= 0.0) || !(b >= 0.0))
        throw ValidationError("negative distance at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      if (std::abs(a - b) > kSymTol * (1.0 + std::abs(a)))
        throw ValidationError("asymmetric distance at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      const double d = 0.5 * (a + b);
      distances(i, j) = d;
      distances(j, i) = d;
    }
  }
  MetricMeasureSpace s;
  s.n_ = n;
  s.matrix_ = std::move(distances);
  s.measure_ = std::move(measure);
  s.label_ = std::move(label);
  s.finalize();
  return s;
}

MetricMeasureSpace MetricMeasureSpace::from_lower_triangle(
    const std::vector<double>& tri, Eigen::VectorXd measure,
    std::string label) {
  const int n = static_cast<int>(measure.size());
  if (tri.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
    throw ValidationError("lower triangle has wrong length for " +
                          std::to_string(n) + " points");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  std::size_t k = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      d(i, j) = tri[k];
      d(j, i) = tri[k];
      ++k;
    }
  return from_matrix(std::move(d), std::move(measure), std::move(label));
}

MetricMeasureSpace MetricMeasureSpace::from_oracle(int n, DistanceFn fn,
                                                   Eigen::VectorXd measure,
                                                   std::string label,
                                                   int materialize_cap) {
  if (n <= 0) throw std::invalid_argument("point count must be positive");
  if (n <= materialize_cap) {
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
      d(i, i) = 0.0;
      for (int j = 0; j < i; ++j) {
        const double v = fn(i, j);
        d(i, j) = v;
        d(j, i) = v;
      }
    }
    return from_matrix(std::move(d), std::move(measure), std::move(label));
  }
  if (measure.size() != n)
    throw ValidationError("measure length does not match point count");
  for (int i = 0; i < n; ++i)
    if (!(measure[i] > 0.0))
      throw ValidationError("measure must be positive at index " +
                            std::to_string(i));
  MetricMeasureSpace s;
  s.n_ = n;
  s.oracle_ = std::move(fn);
  s.measure_ = std::move(measure);
  s.label_ = std::move(label);
  s.finalize();
  return s;
}

void MetricMeasureSpace::finalize() {
  total_measure_ = measure_.sum();
  if (!(total_measure_ > 0.0) || !std::isfinite(total_measure_))
    throw ValidationError("total measure must be finite and positive");
  double diam = 0.0;
  if (matrix_) {
    diam = matrix_->maxCoeff();
  } else {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < i; ++j) diam = std::max(diam, oracle_(i, j));
  }
  diameter_ = diam;
}

double MetricMeasureSpace::min_positive_distance() const {
  if (min_positive_ >= 0.0) return min_positive_;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < i; ++j) {
      const double d = distance(i, j);
      if (d > 0.0) best = std::min(best, d);
    }
  min_positive_ = std::isfinite(best) ? best : 0.0;
  return min_positive_;
}

double MetricMeasureSpace::mesh_norm() const {
  if (mesh_norm_ >= 0.0) return mesh_norm_;
  if (n_ < 2) {
    mesh_norm_ = 0.0;
    return mesh_norm_;
  }
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_; ++j) {
      if (j == i) continue;
      nearest = std::min(nearest, distance(i, j));
    }
    worst = std::max(worst, nearest);
  }
  mesh_norm_ = worst;
  return mesh_norm_;
}

Ball ball(const MetricMeasureSpace& space, int center, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("ball radius must be >= 0");
  Ball b;
  b.center = center;
  b.radius = radius;
  const int n = space.point_count();
  space.distance(center, center);  // index check
  b.members.reserve(16);
  for (int j = 0; j < n; ++j) {
    if (space.distance(center, j) < radius) {
      b.members.push_back(j);
      b.volume += space.mu(j);
    }
  }
  return b;
}

namespace {

// Volume of the open ball without building the member list.
double ball_volume(const MetricMeasureSpace& space, int center,
                   double radius) {
  double v = 0.0;
  for (int j = 0; j < space.point_count(); ++j)
    if (space.distance(center, j) < radius) v += space.mu(j);
  return v;
}

}  // namespace

DoublingEstimate doubling_estimate(const MetricMeasureSpace& space,
                                   const std::vector<double>& radius_grid) {
  if (radius_grid.empty())
    throw std::invalid_argument("doubling estimate needs a nonempty grid");
  for (double r : radius_grid)
    if (!(r > 0.0))
      throw std::invalid_argument("doubling grid radii must be positive");

  DoublingEstimate est;
  est.radius_grid = radius_grid;
  est.exponent = 0.0;
  est.witness_center = 0;
  est.witness_radius = radius_grid.front();
  const int n = space.point_count();
  for (int x = 0; x < n; ++x) {
    for (double r : radius_grid) {
      const double v1 = ball_volume(space, x, r);
      if (!(v1 > 0.0)) continue;
      const double v2 = ball_volume(space, x, 2.0 * r);
      const double e = std::log2(v2 / v1);
      if (e > est.exponent) {
        est.exponent = e;
        est.witness_center = x;
        est.witness_radius = r;
      }
    }
  }
  return est;
}

std::vector<double> doubling_default_grid(const MetricMeasureSpace& space,
                                          int count) {
  if (count < 1) throw std::invalid_argument("grid count must be >= 1");
  const double hi = space.diameter() / 2.0;
  double lo = 2.0 * space.min_positive_distance();
  if (!(hi > 0.0)) return {1.0};  // single-point space: any radius works
  if (!(lo > 0.0) || lo > hi) lo = hi / 16.0;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    grid.push_back(std::sqrt(lo * hi));
    return grid;
  }
  const double step = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k) grid.push_back(lo * std::exp(step * k));
  return grid;
}

BallComparisonReport check_ball_comparisons(const MetricMeasureSpace& space,
                                            double doubling_exponent,
                                            long samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("samples must be positive");
  const int n = space.point_count();
  const double D = doubling_exponent;
  BallComparisonReport rep;
  if (n == 1) {
    rep.samples = samples;
    rep.worst_slack = 1.0;
    return rep;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  const double r_hi = space.diameter() / 2.0;
  double r_lo = 2.0 * space.min_positive_distance();
  if (!(r_lo > 0.0) || r_lo >= r_hi) r_lo = r_hi / 16.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tol = 1.0 + 1e-12;

  auto note = [&rep, tol](double lhs, double rhs, long& counter) {
    if (rhs <= 0.0) return;  // vacuous sample
    const double slack = lhs / rhs;
    rep.worst_slack = std::max(rep.worst_slack, slack);
    if (slack > tol) ++counter;
  };

  for (long s = 0; s < samples; ++s) {
    const int x = pick(rng);
    const int y = pick(rng);
    const double r = r_lo * std::pow(r_hi / r_lo, unit(rng));
    const double p = std::pow(4.0, unit(rng)) * (1.0 + 1e-9);  // p in (1, 4]

    const double vx = ball_volume(space, x, r);
    const double vy = ball_volume(space, y, r);
    note(ball_volume(space, x, p * r), std::pow(2.0 * p, D) * vx,
         rep.violations_growth);
    const double dxy = space.distance(x, y);
    note(vx, std::pow(2.0, D) * std::pow(1.0 + dxy / r, D) * vy,
         rep.violations_transfer);
    if (dxy <= 2.0 * r) {
      // reverse form: 10^-D |B(y, r/2)| <= |B(x, r/2)|
      note(std::pow(10.0, -D) * ball_volume(space, y, r / 2.0),
           ball_volume(space, x, r / 2.0), rep.violations_reverse);
    }
    ++rep.samples;
  }
  return rep;
}

TriangleCheck check_triangle_inequality(const MetricMeasureSpace& space,
                                        long samples, std::uint64_t seed,
                                        bool exhaustive) {
  TriangleCheck out;
  const int n = space.point_count();
  if (n < 3) return out;
  const double tol = 1e-9 * (1.0 + space.diameter());
  auto probe = [&](int i, int j, int k) {
    const double excess =
        space.distance(i, k) - space.distance(i, j) - space.distance(j, k);
    ++out.checked;
    if (excess > out.worst_excess) {
      out.worst_excess = excess;
      out.witness = {i, j, k};
    }
    if (excess > tol) ++out.violations;
  };
  if (exhaustive) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          probe(i, j, k);
        }
      }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (long s = 0; s < samples; ++s)
    probe(pick(rng), pick(rng), pick(rng));
  return out;
}

}  // namespace wwl
