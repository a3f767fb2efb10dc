#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "wwl/instances.hpp"
#include "wwl/spectral.hpp"

using namespace wwl;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTau = 2.0 * kPi;

const Instance& circle512() {
  static const Instance inst = make_circle(512, kTau);
  return inst;
}

const SpectralDecomposition& dec512() {
  static const SpectralDecomposition dec = decompose(circle512().op);
  return dec;
}

Eigen::VectorXd random_fn(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) f[i] = gauss(rng);
  return f;
}

}  // namespace

TEST_CASE("circle spectrum matches the circulant closed form") {
  const int n = 512;
  const double h = kTau / n;
  const SpectralDecomposition& dec = dec512();
  // lambda_k = (4/h^2) sin^2(k h / 2) with multiplicity 2; the first 50
  // stay within 1% of k^2.
  for (int idx = 1; idx < 50; ++idx) {
    const int k = (idx + 1) / 2;
    const double exact = 4.0 / (h * h) * std::pow(std::sin(0.5 * k * h), 2);
    CHECK(dec.eigenvalues[idx] == doctest::Approx(exact).epsilon(1e-8));
    CHECK(dec.eigenvalues[idx] ==
          doctest::Approx(static_cast<double>(k) * k).epsilon(0.01));
  }
}

TEST_CASE("two-point operator has eigenvalues 0 and 2") {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  auto space = std::make_shared<const MetricMeasureSpace>(
      MetricMeasureSpace::from_matrix(d, Eigen::VectorXd::Ones(2), "pair"));
  auto op = DirichletOperator::from_edges(space, {{0, 1, 1.0}});
  const SpectralDecomposition dec = decompose(op);
  CHECK(dec.eigenvalues[0] == 0.0);
  CHECK(dec.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("kernel of a connected operator is the constants") {
  const SpectralDecomposition& dec = dec512();
  CHECK(dec.eigenvalues[0] == 0.0);
  CHECK(dec.eigenvalues[1] > 0.5);
  const Eigen::VectorXd psi0 = dec.eigenvectors.col(0);
  CHECK((psi0.array() - psi0[0]).abs().maxCoeff() <= 1e-8 * std::abs(psi0[0]));
}

TEST_CASE("decomposition invariants: residuals and mu-orthonormality") {
  const SpectralDecomposition& dec = dec512();
  const DirichletOperator& op = circle512().op;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, dec.size() - 1);
  for (int t = 0; t < 24; ++t) {
    const int l = pick(rng);
    const Eigen::VectorXd psi = dec.eigenvectors.col(l);
    const Eigen::VectorXd r = op.apply(psi) - dec.eigenvalues[l] * psi;
    CHECK(std::sqrt(dec.mu_inner(r, r)) <=
          dec.residual_tol * (1.0 + dec.eigenvalues[l]));
    const int m = pick(rng);
    const double inner = dec.mu_inner(psi, dec.eigenvectors.col(m));
    CHECK(std::abs(inner - (l == m ? 1.0 : 0.0)) <= dec.residual_tol);
  }
}

TEST_CASE("decomposition refuses instances above the cap") {
  const Instance inst = make_circle(64, kTau);
  CHECK_THROWS_AS(decompose(inst.op, 32), CapabilityError);
}

TEST_CASE("counting function on the analytic circle spectrum") {
  const std::vector<double> eigs = circle_spectrum(kTau, 1e4);
  CHECK(counting(eigs, 10.0) == 7);   // k in {-3..3}
  CHECK(counting(eigs, 0.0) == 1);    // the constant mode
  CHECK(counting(eigs, -1.0) == 0);
  CHECK(counting(eigs, 9.0) == 7);    // boundary included: k = +-3 at 9
  CHECK(counting(eigs, 8.9999) == 5);
}

TEST_CASE("counting is a right-continuous step with multiplicity jumps") {
  const SpectralDecomposition& dec = dec512();
  CHECK(counting(dec, dec.eigenvalues[dec.size() - 1]) == dec.size());
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> pick(1, dec.size() - 2);
  for (int t = 0; t < 16; ++t) {
    const int l = pick(rng);
    const double lam = dec.eigenvalues[l];
    const double tol = 1e-9 * (1.0 + lam);  // degenerate pairs split by noise
    int mult = 0;
    for (int j = 0; j < dec.size(); ++j)
      if (std::abs(dec.eigenvalues[j] - lam) <= tol) ++mult;
    const int jump = counting(dec, lam + tol) - counting(dec, lam - tol);
    CHECK(jump == mult);
  }
}

TEST_CASE("Paley-Wiener dimension equals the counting function") {
  const SpectralDecomposition& dec = dec512();
  for (double omega : {0.0, 0.5, 3.9, 4.0, 100.0, 1e9}) {
    const PaleyWienerSpace pw = pw_space(dec, omega);
    CHECK(static_cast<int>(pw.member_indices.size()) == counting(dec, omega));
  }
}

TEST_CASE("spectral projection") {
  const SpectralDecomposition& dec = dec512();
  const Eigen::VectorXd psi3 = dec.eigenvectors.col(3);
  const double lam3 = dec.eigenvalues[3];

  SUBCASE("fixes members of the band") {
    const Eigen::VectorXd p = pw_project(dec, lam3 + 1e-9, psi3);
    CHECK((p - psi3).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("annihilates modes above the band") {
    const Eigen::VectorXd p = pw_project(dec, lam3 * 0.5, psi3);
    CHECK(p.cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("full band reproduces anything") {
    const Eigen::VectorXd f = random_fn(dec.size(), 31);
    const Eigen::VectorXd p =
        pw_project(dec, dec.eigenvalues[dec.size() - 1], f);
    CHECK((p - f).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("idempotent and mu-self-adjoint") {
    const Eigen::VectorXd f = random_fn(dec.size(), 32);
    const Eigen::VectorXd g = random_fn(dec.size(), 33);
    const Eigen::VectorXd pf = pw_project(dec, 40.0, f);
    const Eigen::VectorXd ppf = pw_project(dec, 40.0, pf);
    CHECK((pf - ppf).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(dec.mu_inner(pf, g) ==
          doctest::Approx(dec.mu_inner(f, pw_project(dec, 40.0, g)))
              .epsilon(1e-9));
  }
}

TEST_CASE("reconstruction from the full eigenbasis") {
  const SpectralDecomposition& dec = dec512();
  const Eigen::VectorXd f = random_fn(dec.size(), 41);
  const Eigen::VectorXd coef = dec.coefficients(f);
  const Eigen::VectorXd back = dec.eigenvectors * coef;
  CHECK((back - f).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("Bernstein inequality on band-limited functions") {
  const SpectralDecomposition& dec = dec512();

  SUBCASE("single mode ratio is (lambda/omega)^{k/2}") {
    const double lam = dec.eigenvalues[5];
    const double omega = 2.0 * lam;
    const BernsteinReport rep = bernstein_check(dec, omega, 2, 0, 1);
    CHECK(rep.top_mode_ratio ==
          doctest::Approx(dec.eigenvalues[counting(dec, omega) - 1] / omega)
              .epsilon(1e-12));
  }
  SUBCASE("sharp at omega equal to an eigenvalue") {
    const double omega = dec.eigenvalues[9];
    for (int k : {1, 2, 4}) {
      const BernsteinReport rep = bernstein_check(dec, omega, k, 100, 2);
      CHECK(rep.max_ratio <= 1.0 + 1e-8);
      CHECK(rep.top_mode_ratio >= 1.0 - 1e-8);
    }
  }
  SUBCASE("random band functions stay below 1 and reach 0.9 with top mode") {
    const BernsteinReport rep = bernstein_check(dec, 100.0, 4, 200, 3);
    CHECK(rep.max_ratio <= 1.0 + 1e-8);
    CHECK(rep.max_ratio >= 0.9);
  }
  SUBCASE("trivial band raises a capability error") {
    CHECK_THROWS_AS(bernstein_check(dec, -1.0, 2, 10, 1), CapabilityError);
  }
}

TEST_CASE("scalar splitting inequality behind the sampling estimate") {
  // (1+a)^{-1} A^2 <= a^{-1} (A-B)^2 + B^2 for every a > 0.
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  std::uniform_real_distribution<double> alpha(1e-3, 10.0);
  for (int t = 0; t < 2000; ++t) {
    const double A = val(rng), B = val(rng), a = alpha(rng);
    CHECK(A * A / (1.0 + a) <= (A - B) * (A - B) / a + B * B + 1e-12);
  }
}

TEST_CASE("frame bounds of ball-average functionals") {
  const SpectralDecomposition& dec = dec512();
  const MetricMeasureSpace& space = *circle512().space;

  SUBCASE("constants-only band with any covering lattice") {
    const Lattice lat = build_lattice(space, 0.5, LatticeOrder::index);
    const FrameBounds fb = frame_bound(dec, 0.5, lat);  // omega < lambda_1
    CHECK(fb.dim == 1);
    // sum_j |B_j| >= mu(X) for a cover, so the Gram value is >= 1.
    CHECK(fb.lower >= 1.0 - 1e-9);
  }
  SUBCASE("dense lattice at gamma = 0.1 certifies sampling") {
    const double omega = 100.0;
    const double rho = 0.1 / std::sqrt(omega);
    const Lattice lat = build_lattice(space, rho, LatticeOrder::index);
    const FrameBounds fb = frame_bound(dec, omega, lat);
    CHECK(fb.dim == counting(dec, omega));
    CHECK(fb.lower > 0.0);
    CHECK(fb.upper >= fb.lower);
  }
  SUBCASE("half-circle centers lose the frame property") {
    const double omega = 100.0;
    const double rho = 0.1 / std::sqrt(omega);
    const Lattice lat = build_lattice(space, rho, LatticeOrder::index);
    std::vector<int> half;
    for (int c : lat.centers)
      if (space.distance(0, c) < kPi / 2.0) half.push_back(c);
    REQUIRE_FALSE(half.empty());
    const FrameBounds fb = frame_bound(dec, omega, half, rho);
    CHECK(fb.lower <= 1e-6);
  }
  SUBCASE("adding functionals never lowers the Gram minimum") {
    const double omega = 60.0;
    const double rho = 0.05;
    const Lattice lat = build_lattice(space, rho, LatticeOrder::index);
    std::vector<int> some(lat.centers.begin(),
                          lat.centers.begin() + lat.centers.size() / 2);
    const FrameBounds partial = frame_bound(dec, omega, some, rho);
    const FrameBounds full = frame_bound(dec, omega, lat.centers, rho);
    CHECK(full.lower >= partial.lower - 1e-12);
  }
  SUBCASE("empty band raises a capability error") {
    const Lattice lat = build_lattice(space, 0.5, LatticeOrder::index);
    CHECK_THROWS_AS(frame_bound(dec, -1.0, lat), CapabilityError);
  }
}

TEST_CASE("Weyl fit on the analytic circle spectrum") {
  const std::vector<double> eigs = circle_spectrum(kTau, 2e4);
  const WeylFit fit = weyl_fit(eigs, log_grid(1e2, 1e4, 25));
  CHECK(std::abs(fit.slope - 0.5) <= 0.02);
  CHECK(fit.r_squared > 0.999);
}

TEST_CASE("Weyl fit on the analytic torus spectrum") {
  const std::vector<double> eigs = torus2_spectrum(kTau, kTau, 2e3);
  const WeylFit fit = weyl_fit(eigs, log_grid(20.0, 1e3, 20));
  CHECK(std::abs(fit.slope - 1.0) <= 0.1);
}

TEST_CASE("Weyl fit drops zero-count entries and rejects degenerate grids") {
  const std::vector<double> eigs = circle_spectrum(kTau, 1e4);
  // negative omegas have N = 0 and are dropped
  const WeylFit fit = weyl_fit(eigs, {-5.0, -1.0, 1e2, 1e3, 1e4});
  CHECK(fit.points_used == 3);
  CHECK_THROWS_AS(weyl_fit(eigs, {100.0, 100.0, 100.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(weyl_fit(eigs, {-3.0, -2.0}), std::invalid_argument);
}
