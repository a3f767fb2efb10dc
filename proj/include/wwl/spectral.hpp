#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "wwl/dirichlet.hpp"
#include "wwl/lattice.hpp"

namespace wwl {

/// Full eigendecomposition of a Dirichlet operator: ascending eigenvalues of
/// L with mu-orthonormal eigenvector columns. Conventions used everywhere
/// downstream: lambda always refers to L (never sqrt L); E_omega is spanned by
/// modes with lambda <= omega; spectral sums indexed by a scale s compare
/// sqrt(lambda) against s.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending, lambda_0 clamped to 0 when tiny
  Eigen::MatrixXd eigenvectors;  // column l = psi_l, mu-orthonormal
  double residual_tol = 0.0;
  std::shared_ptr<const MetricMeasureSpace> space;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  double mu_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    return f.cwiseProduct(g).dot(space->measure());
  }
  /// Coefficients <f, psi_l>_mu for all modes.
  Eigen::VectorXd coefficients(const Eigen::VectorXd& f) const;
};

/// Dense symmetric solve of diag(mu)^{1/2} L diag(mu)^{-1/2}; refuses sizes
/// above `cap` (default matches the distance-matrix cap).
SpectralDecomposition decompose(const DirichletOperator& op, int cap = 4096);

/// Counting function N_omega: eigenvalues <= omega, with multiplicity.
int counting(const std::vector<double>& ascending_eigenvalues, double omega);
int counting(const SpectralDecomposition& dec, double omega);

struct PaleyWienerSpace {
  double omega = 0.0;
  std::vector<int> member_indices;  // { l : lambda_l <= omega }
};

PaleyWienerSpace pw_space(const SpectralDecomposition& dec, double omega);

/// Spectral projection onto E_omega; idempotent and mu-self-adjoint.
Eigen::VectorXd pw_project(const SpectralDecomposition& dec, double omega,
                           const Eigen::VectorXd& f);

struct BernsteinReport {
  double max_ratio = 0.0;       // max ||L^{k/2} f|| / (omega^{k/2} ||f||)
  double top_mode_ratio = 0.0;  // ratio for f = top included eigenvector
  int dim = 0;
};

/// Random band-limited trials (normal coefficients over E_omega) plus the top
/// included mode; the ratio cannot exceed 1 and reaches it when omega sits on
/// an eigenvalue.
BernsteinReport bernstein_check(const SpectralDecomposition& dec, double omega,
                                int k, int trials, std::uint64_t seed = 1);

struct FrameBounds {
  double lower = 0.0;  // min eigenvalue of the sampling Gram form on E_omega
  double upper = 0.0;
  int dim = 0;          // dim E_omega
  int functionals = 0;  // number of lattice centers
};

/// Gram bounds of the ball-average functionals
///   xi_j = |B(x_j, rho)|^{-1/2} chi_{B(x_j, rho)}
/// restricted to E_omega. lower > 0 certifies ||f||^2 <= C1 sum_j |<f,xi_j>|^2
/// on E_omega with C1 = 1/lower.
FrameBounds frame_bound(const SpectralDecomposition& dec, double omega,
                        const Lattice& lattice);
FrameBounds frame_bound(const SpectralDecomposition& dec, double omega,
                        const std::vector<int>& centers, double rho);

struct WeylFit {
  double slope = 0.0;  // of log N_omega against log omega; ~ n/2
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

/// Least-squares fit of log N_omega vs log omega; grid entries with
/// N_omega = 0 are dropped.
WeylFit weyl_fit(const std::vector<double>& ascending_eigenvalues,
                 const std::vector<double>& omega_grid);

/// Log-spaced grid helper for sweeps and fits.
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace wwl
