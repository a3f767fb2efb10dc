#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

#include "wwl/spectral.hpp"

namespace wwl {

/// Heat kernel of e^{-tL}: P_t(x,y) = sum_l e^{-t lambda_l} psi_l(x) psi_l(y).
/// Applying it through apply_kernel reproduces e^{-tL} f.
Eigen::MatrixXd heat_kernel(const SpectralDecomposition& dec, double t);

/// Single entry P_t(x,y) without assembling the full matrix.
double heat_kernel_entry(const SpectralDecomposition& dec, double t, int x,
                         int y);

/// (K f)(x) = sum_y K(x,y) f(y) mu_y.
Eigen::VectorXd apply_kernel(const MetricMeasureSpace& space,
                             const Eigen::MatrixXd& K,
                             const Eigen::VectorXd& f);

/// Kernel of F(t sqrt(L)): K^F_t(x,y) = sum_l F(t sqrt(lambda_l)) psi psi.
Eigen::MatrixXd kernel_of(const SpectralDecomposition& dec,
                          const std::function<double(double)>& F, double t);

/// Spectral function Phi_s(x) = sum over sqrt(lambda_l) <= s of |psi_l(x)|^2;
/// its mu-integral equals the counting function at s^2 exactly.
Eigen::VectorXd spectral_function(const SpectralDecomposition& dec, double s);

/// Two-sided Gaussian envelope of the volume-normalized heat kernel.
/// For retained samples G = P_t(x,y) sqrt(|B(x,sqrt t)| |B(y,sqrt t)|):
///   C1 e^{-c1 u} <= G <= C2 e^{-c2 u},  u = d(x,y)^2 / t.
/// Envelope lines are support lines of the log-sample cloud (rates from the
/// convex hull near the sample centroid, intercepts tightened against every
/// sample); least-squares slope is kept as a diagnostic only.
struct GaussianFit {
  double C1 = 0.0, C2 = 0.0;  // amplitudes, C1 <= C2
  double c1 = 0.0, c2 = 0.0;  // rates, c2 <= c1
  double t_min = 0.0, t_max = 0.0;
  double d2t_cap = 0.0;
  double residual_r2 = 0.0;   // of the diagnostic least-squares line
  double ls_rate = 0.0;       // diagnostic least-squares decay rate
  double excluded_fraction = 0.0;  // nonpositive P_t samples inside the cap
  long retained = 0;
  double diag_min = 0.0, diag_max = 0.0;  // band of P_t(x,x) |B(x, sqrt t)|
  /// Per-sample rows (x, y, t, d^2/t, P_t, |B(x,sqrt t)|, |B(y,sqrt t)|, G)
  /// when capture_samples is requested.
  std::vector<std::array<double, 8>> samples;
};

struct GaussianFitOptions {
  int max_centers = 48;
  int max_pairs_per_center = 48;
  std::uint64_t seed = 1;
  double exclusion_limit = 0.05;
  bool capture_samples = false;  // keep per-sample rows for table export
};

GaussianFit gaussian_fit(const SpectralDecomposition& dec,
                         const MetricMeasureSpace& space,
                         const std::vector<double>& t_grid, double d2t_cap,
                         const GaussianFitOptions& opt = {});

/// Two-sided comparability of |B(x, 1/s)| * Phi_s(x) over a scale grid, plus
/// numeric spot checks of the scalar cutoff bound
///   chi_{[0,s]}(lambda) <= e * exp(-lambda^2 / s^2)
/// and the dyadic heat-trace decomposition behind it.
struct SpectralFunctionBound {
  double a1 = 0.0, a2 = 0.0;  // min / max of |B(x, 1/s)| Phi_s(x)
  double worst_ratio = 0.0;   // a2 / a1
  std::vector<double> s_grid;
  long skipped = 0;  // balls with fewer than two members at radius 1/s
  long cutoff_violations = 0;
  long dyadic_violations = 0;
};

SpectralFunctionBound lemma_key_check(const SpectralDecomposition& dec,
                                      const MetricMeasureSpace& space,
                                      const std::vector<double>& s_grid,
                                      std::uint64_t seed = 1);

}  // namespace wwl
