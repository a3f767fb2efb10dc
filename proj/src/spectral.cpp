#include "wwl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wwl/common.hpp"

namespace wwl {

Eigen::VectorXd SpectralDecomposition::coefficients(
    const Eigen::VectorXd& f) const {
  return eigenvectors.transpose() * f.cwiseProduct(space->measure());
}

SpectralDecomposition decompose(const DirichletOperator& op, int cap) {
  const int n = op.space().point_count();
  if (n > cap)
    throw CapabilityError(
        "dense eigendecomposition capped at " + std::to_string(cap) +
        " points (got " + std::to_string(n) + "); use a coarser instance");

  // S = M^{1/2} L M^{-1/2} = M^{-1/2} B M^{-1/2}, symmetric.
  Eigen::MatrixXd S = op.form_matrix();
  Eigen::VectorXd inv_sqrt_mu(n);
  for (int i = 0; i < n; ++i)
    inv_sqrt_mu[i] = 1.0 / std::sqrt(op.space().mu(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) *= inv_sqrt_mu[i] * inv_sqrt_mu[j];
  S = 0.5 * (S + S.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");

  SpectralDecomposition dec;
  dec.space = op.space_ptr();
  dec.eigenvalues = solver.eigenvalues();
  dec.eigenvectors = solver.eigenvectors();
  for (int i = 0; i < n; ++i) dec.eigenvectors.row(i) *= inv_sqrt_mu[i];

  const double lam_max = dec.eigenvalues[n - 1];
  dec.residual_tol = 1e-10 * (1.0 + std::abs(lam_max));
  for (int l = 0; l < n; ++l) {
    if (std::abs(dec.eigenvalues[l]) <= dec.residual_tol)
      dec.eigenvalues[l] = 0.0;
    else
      break;  // ascending: once past the tolerance band, stop clamping
  }
  if (dec.eigenvalues[0] < -dec.residual_tol)
    throw std::runtime_error("negative eigenvalue beyond tolerance: " +
                             std::to_string(dec.eigenvalues[0]));
  return dec;
}

int counting(const std::vector<double>& ascending_eigenvalues, double omega) {
  const auto it = std::upper_bound(ascending_eigenvalues.begin(),
                                   ascending_eigenvalues.end(), omega);
  return static_cast<int>(it - ascending_eigenvalues.begin());
}

int counting(const SpectralDecomposition& dec, double omega) {
  const double* begin = dec.eigenvalues.data();
  const double* end = begin + dec.size();
  return static_cast<int>(std::upper_bound(begin, end, omega) - begin);
}

PaleyWienerSpace pw_space(const SpectralDecomposition& dec, double omega) {
  PaleyWienerSpace pw;
  pw.omega = omega;
  const int m = counting(dec, omega);
  pw.member_indices.resize(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) pw.member_indices[static_cast<std::size_t>(l)] = l;
  return pw;
}

Eigen::VectorXd pw_project(const SpectralDecomposition& dec, double omega,
                           const Eigen::VectorXd& f) {
  if (f.size() != dec.size())
    throw std::invalid_argument("function length does not match point count");
  const int m = counting(dec, omega);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dec.size());
  if (m == 0) return out;
  const auto basis = dec.eigenvectors.leftCols(m);
  const Eigen::VectorXd coef =
      basis.transpose() * f.cwiseProduct(dec.space->measure());
  out = basis * coef;
  return out;
}

BernsteinReport bernstein_check(const SpectralDecomposition& dec, double omega,
                                int k, int trials, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("Bernstein power k must be >= 1");
  const int m = counting(dec, omega);
  if (m == 0)
    throw CapabilityError("E_omega is trivial for omega = " +
                          std::to_string(omega));
  BernsteinReport rep;
  rep.dim = m;

  const auto lam = dec.eigenvalues.head(m);
  auto ratio_for = [&](const Eigen::VectorXd& coef) {
    double num = 0.0, den = 0.0;
    for (int l = 0; l < m; ++l) {
      const double c2 = coef[l] * coef[l];
      num += std::pow(lam[l], k) * c2;
      den += c2;
    }
    if (den <= 0.0) return 0.0;
    return std::sqrt(num / den) / std::pow(omega, 0.5 * k);
  };

  Eigen::VectorXd top = Eigen::VectorXd::Zero(m);
  top[m - 1] = 1.0;
  rep.top_mode_ratio = ratio_for(top);
  rep.max_ratio = rep.top_mode_ratio;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd coef(m);
    for (int l = 0; l < m; ++l) coef[l] = gauss(rng);
    rep.max_ratio = std::max(rep.max_ratio, ratio_for(coef));
  }
  return rep;
}

FrameBounds frame_bound(const SpectralDecomposition& dec, double omega,
                        const std::vector<int>& centers, double rho) {
  const int m = counting(dec, omega);
  if (m == 0)
    throw CapabilityError("E_omega is trivial for omega = " +
                          std::to_string(omega));
  const int J = static_cast<int>(centers.size());
  if (J == 0) throw std::invalid_argument("frame bound needs centers");

  Eigen::MatrixXd A(J, m);
  for (int j = 0; j < J; ++j) {
    const Ball b = ball(*dec.space, centers[static_cast<std::size_t>(j)], rho);
    if (!(b.volume > 0.0)) {
      A.row(j).setZero();
      continue;
    }
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(m);
    for (int x : b.members)
      acc += dec.space->mu(x) * dec.eigenvectors.row(x).head(m);
    A.row(j) = acc / std::sqrt(b.volume);
  }
  const Eigen::MatrixXd gram = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram,
                                                        Eigen::EigenvaluesOnly);
  FrameBounds fb;
  fb.dim = m;
  fb.functionals = J;
  fb.lower = solver.eigenvalues()[0];
  fb.upper = solver.eigenvalues()[m - 1];
  return fb;
}

FrameBounds frame_bound(const SpectralDecomposition& dec, double omega,
                        const Lattice& lattice) {
  return frame_bound(dec, omega, lattice.centers, lattice.rho);
}

WeylFit weyl_fit(const std::vector<double>& ascending_eigenvalues,
                 const std::vector<double>& omega_grid) {
  std::vector<double> xs, ys;
  xs.reserve(omega_grid.size());
  ys.reserve(omega_grid.size());
  for (double omega : omega_grid) {
    if (!(omega > 0.0)) continue;
    const int n = counting(ascending_eigenvalues, omega);
    if (n <= 0) continue;  // dropped
    xs.push_back(std::log(omega));
    ys.push_back(std::log(static_cast<double>(n)));
  }
  const std::size_t npts = xs.size();
  if (npts < 2)
    throw std::invalid_argument("Weyl fit needs at least two usable points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(npts);
  my /= static_cast<double>(npts);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("degenerate Weyl fit: constant omega grid");
  WeylFit fit;
  fit.points_used = static_cast<int>(npts);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1)
    throw std::invalid_argument("log grid needs 0 < lo <= hi and count >= 1");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    g.push_back(std::sqrt(lo * hi));
    return g;
  }
  const double step = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k) g.push_back(lo * std::exp(step * k));
  return g;
}

}  // namespace wwl
