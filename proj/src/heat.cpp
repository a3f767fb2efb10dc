#include "wwl/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wwl/common.hpp"

namespace wwl {

namespace {

// Modes with t*lambda beyond this contribute less than ~1e-22 and are skipped.
constexpr double kExpCut = 50.0;

int active_modes(const SpectralDecomposition& dec, double t) {
  const double lam_cut = kExpCut / t;
  return counting(dec, lam_cut);
}

}  // namespace

Eigen::MatrixXd heat_kernel(const SpectralDecomposition& dec, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat kernel needs t > 0");
  const int n = dec.size();
  const int m = std::max(1, active_modes(dec, t));
  Eigen::VectorXd w(m);
  for (int l = 0; l < m; ++l) w[l] = std::exp(-t * dec.eigenvalues[l]);
  const auto basis = dec.eigenvectors.leftCols(m);
  return basis * w.asDiagonal() * basis.transpose();
}

double heat_kernel_entry(const SpectralDecomposition& dec, double t, int x,
                         int y) {
  if (!(t > 0.0)) throw std::invalid_argument("heat kernel needs t > 0");
  const int m = std::max(1, active_modes(dec, t));
  double acc = 0.0;
  for (int l = 0; l < m; ++l)
    acc += std::exp(-t * dec.eigenvalues[l]) * dec.eigenvectors(x, l) *
           dec.eigenvectors(y, l);
  return acc;
}

Eigen::VectorXd apply_kernel(const MetricMeasureSpace& space,
                             const Eigen::MatrixXd& K,
                             const Eigen::VectorXd& f) {
  if (f.size() != space.point_count() || K.rows() != f.size() ||
      K.cols() != f.size())
    throw std::invalid_argument("kernel application size mismatch");
  return K * f.cwiseProduct(space.measure());
}

Eigen::MatrixXd kernel_of(const SpectralDecomposition& dec,
                          const std::function<double(double)>& F, double t) {
  const int n = dec.size();
  Eigen::VectorXd w(n);
  for (int l = 0; l < n; ++l)
    w[l] = F(t * std::sqrt(std::max(0.0, dec.eigenvalues[l])));
  return dec.eigenvectors * w.asDiagonal() * dec.eigenvectors.transpose();
}

Eigen::VectorXd spectral_function(const SpectralDecomposition& dec, double s) {
  if (!(s > 0.0))
    throw std::invalid_argument("spectral function needs s > 0");
  const int m = counting(dec, s * s);  // sqrt(lambda) <= s
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(dec.size());
  for (int l = 0; l < m; ++l)
    phi += dec.eigenvectors.col(l).cwiseAbs2();
  return phi;
}

namespace {

struct Sample {
  double u = 0.0;  // d^2 / t
  double y = 0.0;  // log G
};

// Upper boundary of the convex hull (Andrew chain); flip y for the lower one.
std::vector<Sample> upper_hull(std::vector<Sample> pts) {
  std::sort(pts.begin(), pts.end(), [](const Sample& a, const Sample& b) {
    return a.u < b.u || (a.u == b.u && a.y < b.y);
  });
  std::vector<Sample> hull;
  for (const Sample& p : pts) {
    while (hull.size() >= 2) {
      const Sample& a = hull[hull.size() - 2];
      const Sample& b = hull[hull.size() - 1];
      if ((b.y - a.y) * (p.u - a.u) - (p.y - a.y) * (b.u - a.u) >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  return hull;
}

// Slope of the hull edge spanning the abscissa u_ref.
double hull_slope_at(const std::vector<Sample>& hull, double u_ref) {
  if (hull.size() < 2) return 0.0;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    if (u_ref <= hull[i + 1].u || i + 2 == hull.size()) {
      const double du = hull[i + 1].u - hull[i].u;
      if (du <= 0.0) continue;
      return (hull[i + 1].y - hull[i].y) / du;
    }
  }
  const double du = hull.back().u - hull.front().u;
  return du > 0.0 ? (hull.back().y - hull.front().y) / du : 0.0;
}

}  // namespace

GaussianFit gaussian_fit(const SpectralDecomposition& dec,
                         const MetricMeasureSpace& space,
                         const std::vector<double>& t_grid, double d2t_cap,
                         const GaussianFitOptions& opt) {
  if (t_grid.empty())
    throw std::invalid_argument("Gaussian fit needs a nonempty t grid");
  for (double t : t_grid)
    if (!(t > 0.0)) throw std::invalid_argument("t grid must be positive");
  if (!(d2t_cap > 0.0))
    throw std::invalid_argument("d^2/t cap must be positive");

  const int n = space.point_count();
  GaussianFit fit;
  fit.t_min = *std::min_element(t_grid.begin(), t_grid.end());
  fit.t_max = *std::max_element(t_grid.begin(), t_grid.end());
  fit.d2t_cap = d2t_cap;
  fit.diag_min = std::numeric_limits<double>::infinity();
  fit.diag_max = 0.0;

  std::mt19937_64 rng(opt.seed);
  const int n_centers = std::min(n, opt.max_centers);
  std::vector<int> centers;
  centers.reserve(static_cast<std::size_t>(n_centers));
  for (int k = 0; k < n_centers; ++k)
    centers.push_back(static_cast<int>((static_cast<long>(k) * n) / n_centers));

  std::vector<Sample> samples;
  long excluded = 0;

  for (double t : t_grid) {
    const double rt = std::sqrt(t);
    for (int x : centers) {
      const double volx = ball(space, x, rt).volume;
      if (!(volx > 0.0)) continue;

      // diagonal band, always sampled
      const double pxx = heat_kernel_entry(dec, t, x, x);
      if (pxx > 0.0) {
        const double g = pxx * volx;
        fit.diag_min = std::min(fit.diag_min, g);
        fit.diag_max = std::max(fit.diag_max, g);
        samples.push_back({0.0, std::log(g)});
        if (opt.capture_samples)
          fit.samples.push_back({static_cast<double>(x),
                                 static_cast<double>(x), t, 0.0, pxx, volx,
                                 volx, g});
      } else {
        ++excluded;
      }

      std::vector<int> candidates;
      for (int y = 0; y < n; ++y) {
        if (y == x) continue;
        const double d = space.distance(x, y);
        if (d * d <= d2t_cap * t) candidates.push_back(y);
      }
      if (static_cast<int>(candidates.size()) > opt.max_pairs_per_center)
        std::shuffle(candidates.begin(), candidates.end(), rng);
      const int take = std::min<int>(static_cast<int>(candidates.size()),
                                     opt.max_pairs_per_center);
      for (int c = 0; c < take; ++c) {
        const int y = candidates[static_cast<std::size_t>(c)];
        const double d = space.distance(x, y);
        const double u = d * d / t;
        const double p = heat_kernel_entry(dec, t, x, y);
        if (!(p > 0.0)) {
          ++excluded;
          continue;
        }
        const double voly = ball(space, y, rt).volume;
        if (!(voly > 0.0)) continue;
        const double g = p * std::sqrt(volx * voly);
        samples.push_back({u, std::log(g)});
        if (opt.capture_samples)
          fit.samples.push_back({static_cast<double>(x),
                                 static_cast<double>(y), t, u, p, volx, voly,
                                 g});
      }
    }
  }

  fit.retained = static_cast<long>(samples.size());
  const long attempted = fit.retained + excluded;
  fit.excluded_fraction =
      attempted > 0 ? static_cast<double>(excluded) / attempted : 0.0;
  if (samples.size() < 8)
    throw FitError("Gaussian fit retained too few samples");
  if (fit.excluded_fraction > opt.exclusion_limit)
    throw FitError("Gaussian fit exclusion rate " +
                   std::to_string(fit.excluded_fraction) + " exceeds limit");

  // Diagnostic least-squares line through (u, log G).
  double mu_u = 0.0, mu_y = 0.0;
  for (const Sample& s : samples) {
    mu_u += s.u;
    mu_y += s.y;
  }
  mu_u /= static_cast<double>(samples.size());
  mu_y /= static_cast<double>(samples.size());
  double suu = 0.0, suy = 0.0, syy = 0.0;
  for (const Sample& s : samples) {
    suu += (s.u - mu_u) * (s.u - mu_u);
    suy += (s.u - mu_u) * (s.y - mu_y);
    syy += (s.y - mu_y) * (s.y - mu_y);
  }
  fit.ls_rate = suu > 0.0 ? -suy / suu : 0.0;
  fit.residual_r2 = (suu > 0.0 && syy > 0.0) ? (suy * suy) / (suu * syy) : 1.0;

  // Support-line rates from the hull edges covering the sample centroid.
  std::vector<Sample> flipped = samples;
  for (Sample& s : flipped) s.y = -s.y;
  const double rate_upper = -hull_slope_at(upper_hull(samples), mu_u);
  const double rate_lower = hull_slope_at(upper_hull(flipped), mu_u);
  fit.c1 = std::max(rate_upper, rate_lower);
  fit.c2 = std::min(rate_upper, rate_lower);

  // Tightest intercepts for the chosen rates; the bound then holds at every
  // retained sample, and the u = 0 samples force C1 <= C2.
  double log_c2 = -std::numeric_limits<double>::infinity();
  double log_c1 = std::numeric_limits<double>::infinity();
  for (const Sample& s : samples) {
    log_c2 = std::max(log_c2, s.y + fit.c2 * s.u);
    log_c1 = std::min(log_c1, s.y + fit.c1 * s.u);
  }
  fit.C1 = std::exp(log_c1);
  fit.C2 = std::exp(log_c2);
  return fit;
}

SpectralFunctionBound lemma_key_check(const SpectralDecomposition& dec,
                                      const MetricMeasureSpace& space,
                                      const std::vector<double>& s_grid,
                                      std::uint64_t seed) {
  if (s_grid.empty())
    throw std::invalid_argument("lemma-key check needs a nonempty s grid");
  SpectralFunctionBound out;
  out.s_grid = s_grid;
  out.a1 = std::numeric_limits<double>::infinity();
  out.a2 = 0.0;
  const int n = space.point_count();

  for (double s : s_grid) {
    if (!(s > 0.0)) throw std::invalid_argument("s grid must be positive");
    const Eigen::VectorXd phi = spectral_function(dec, s);
    const double r = 1.0 / s;
    for (int x = 0; x < n; ++x) {
      const Ball b = ball(space, x, r);
      if (b.members.size() < 2) {
        ++out.skipped;  // single-point ball: below sampling scale
        continue;
      }
      const double v = b.volume * phi[x];
      out.a1 = std::min(out.a1, v);
      out.a2 = std::max(out.a2, v);
    }
  }
  out.worst_ratio = (out.a1 > 0.0 && std::isfinite(out.a1))
                        ? out.a2 / out.a1
                        : std::numeric_limits<double>::infinity();

  // Scalar cutoff bound chi_{[0,s]}(lambda) <= e * exp(-(lambda/s)^2) on
  // random (lambda, s) pairs, with the boundary case lambda = s included.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lam_top = dec.eigenvalues[dec.size() - 1];
  for (int trial = 0; trial < 512; ++trial) {
    const double s = s_grid.front() +
                     (s_grid.back() - s_grid.front()) * unit(rng);
    double lam = unit(rng) * std::max(1.0, std::sqrt(lam_top));
    if (trial % 16 == 0) lam = s;  // boundary: equality e * e^{-1} = 1
    const double chi = lam <= s ? 1.0 : 0.0;
    const double bound = std::exp(1.0) * std::exp(-(lam * lam) / (s * s));
    if (chi > bound * (1.0 + 1e-12)) ++out.cutoff_violations;
  }

  // Dyadic decomposition bound at sampled x: with t s^2 = 4^m,
  //   P_t(x,x) <= Phi_s(x) + sum_{j>=0} e^{-t 4^j s^2} Phi_{2^{j+1} s}(x).
  const double sqrt_lam_top = std::sqrt(std::max(1.0, lam_top));
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (double s : {s_grid.front(), s_grid.back()}) {
    for (int m = 0; m <= 1; ++m) {
      const double t = std::pow(4.0, m) / (s * s);
      Eigen::VectorXd rhs = spectral_function(dec, s);
      double scale = 2.0 * s;
      double damp = std::exp(-t * s * s);
      while (true) {
        rhs += damp * spectral_function(dec, std::min(scale, 2 * sqrt_lam_top));
        if (scale >= sqrt_lam_top || damp < 1e-18) break;
        damp = std::exp(-t * scale * scale);
        scale *= 2.0;
      }
      for (int trial = 0; trial < 32; ++trial) {
        const int x = pick(rng);
        const double lhs = heat_kernel_entry(dec, t, x, x);
        if (lhs > rhs[x] * (1.0 + 1e-9)) ++out.dyadic_violations;
      }
    }
  }
  return out;
}

}  // namespace wwl
