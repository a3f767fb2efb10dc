#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "wwl/heat.hpp"
#include "wwl/instances.hpp"

using namespace wwl;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTau = 2.0 * kPi;

const Instance& circle1024() {
  static const Instance inst = make_circle(1024, kTau);
  return inst;
}

const SpectralDecomposition& dec1024() {
  static const SpectralDecomposition dec = decompose(circle1024().op);
  return dec;
}

// Continuum circle heat kernel truncated far past machine precision.
double circle_heat_oracle(double d, double t) {
  double acc = 1.0 / kTau;
  for (int k = 1; k <= 400; ++k)
    acc += 2.0 / kTau * std::exp(-t * k * k) * std::cos(k * d);
  return acc;
}

}  // namespace

TEST_CASE("heat kernel basics") {
  const SpectralDecomposition& dec = dec1024();
  const MetricMeasureSpace& space = *circle1024().space;

  SUBCASE("rejects t <= 0") {
    CHECK_THROWS_AS(heat_kernel(dec, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(heat_kernel(dec, -1.0), std::invalid_argument);
  }
  SUBCASE("long-time limit is the uniform kernel 1/mu(X)") {
    const Eigen::MatrixXd P = heat_kernel(dec, 50.0);
    CHECK((P.array() - 1.0 / space.total_measure()).abs().maxCoeff() <= 1e-9);
  }
  SUBCASE("symmetry and the semigroup property") {
    const Eigen::MatrixXd P1 = heat_kernel(dec, 0.05);
    CHECK((P1 - P1.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    const Eigen::MatrixXd P2 = heat_kernel(dec, 0.1);
    const Eigen::MatrixXd comp =
        P1 * space.measure().asDiagonal() * P1;  // mu-weighted composition
    CHECK((comp - P2).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("trace identity") {
    const double t = 0.07;
    const Eigen::MatrixXd P = heat_kernel(dec, t);
    const double trace = P.diagonal().dot(space.measure());
    double expect = 0.0;
    for (int l = 0; l < dec.size(); ++l)
      expect += std::exp(-t * dec.eigenvalues[l]);
    CHECK(trace == doctest::Approx(expect).epsilon(1e-9));
  }
  SUBCASE("applying the kernel reproduces e^{-tL}") {
    const double t = 0.03;
    const Eigen::MatrixXd P = heat_kernel(dec, t);
    Eigen::VectorXd f(dec.size());
    for (int i = 0; i < dec.size(); ++i) f[i] = std::sin(kTau * i / 1024.0);
    const Eigen::VectorXd via_kernel = apply_kernel(space, P, f);
    Eigen::VectorXd coef = dec.coefficients(f);
    for (int l = 0; l < dec.size(); ++l)
      coef[l] *= std::exp(-t * dec.eigenvalues[l]);
    const Eigen::VectorXd via_calculus = dec.eigenvectors * coef;
    CHECK((via_kernel - via_calculus).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("heat kernel tracks the continuum circle kernel") {
  // Dispersion of the 3-point stencil contributes ~ h^2 k^4 t e^{-t k^2} per
  // mode; at n = 1024 the measured max gaps are 6.7e-4 (t = 0.01) and
  // 5.9e-5 (t = 0.05). Frozen with ~1.5x headroom.
  const SpectralDecomposition& dec = dec1024();
  const MetricMeasureSpace& space = *circle1024().space;
  const struct {
    double t, bound;
  } cases[] = {{0.01, 1.0e-3}, {0.05, 1.0e-4}};
  for (const auto& c : cases) {
    const Eigen::MatrixXd P = heat_kernel(dec, c.t);
    double worst = 0.0;
    for (int i = 0; i < 1024; i += 37)
      for (int j = 0; j < 1024; j += 41)
        worst = std::max(
            worst, std::abs(P(i, j) -
                            circle_heat_oracle(space.distance(i, j), c.t)));
    CHECK(worst <= c.bound);
  }
}

TEST_CASE("heat_kernel_entry matches the assembled matrix") {
  const SpectralDecomposition& dec = dec1024();
  const Eigen::MatrixXd P = heat_kernel(dec, 0.02);
  for (int i = 0; i < 1024; i += 111)
    for (int j = 0; j < 1024; j += 97)
      CHECK(heat_kernel_entry(dec, 0.02, i, j) ==
            doctest::Approx(P(i, j)).epsilon(1e-12));
}

TEST_CASE("spectral kernels") {
  const SpectralDecomposition& dec = dec1024();
  const MetricMeasureSpace& space = *circle1024().space;

  SUBCASE("F = 1 gives the mu-reproducing kernel") {
    const Eigen::MatrixXd K =
        kernel_of(dec, [](double) { return 1.0; }, 1.0);
    Eigen::VectorXd f(dec.size());
    for (int i = 0; i < dec.size(); ++i) f[i] = std::cos(kTau * 5 * i / 1024.0);
    CHECK((apply_kernel(space, K, f) - f).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("diagonal monotonicity in F") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
      const double cut = unit(rng) * 30.0;
      const double extra = unit(rng);
      auto f1 = [cut](double u) { return u <= cut ? 1.0 : 0.0; };
      auto f2 = [cut, extra](double u) {
        return (u <= cut ? 1.0 : 0.0) + extra * std::exp(-u);
      };
      const Eigen::MatrixXd K1 = kernel_of(dec, f1, 1.0);
      const Eigen::MatrixXd K2 = kernel_of(dec, f2, 1.0);
      CHECK((K2.diagonal() - K1.diagonal()).minCoeff() >= -1e-10);
    }
  }
  SUBCASE("F(u) = exp(-u^2) at t = sqrt(tau) is the heat kernel at tau") {
    const double tau_time = 0.04;
    const Eigen::MatrixXd K = kernel_of(
        dec, [](double u) { return std::exp(-u * u); }, std::sqrt(tau_time));
    const Eigen::MatrixXd P = heat_kernel(dec, tau_time);
    CHECK((K - P).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("spectral function") {
  const SpectralDecomposition& dec = dec1024();
  const MetricMeasureSpace& space = *circle1024().space;

  SUBCASE("homogeneous value 11/(2 pi) at s = 5") {
    const Eigen::VectorXd phi = spectral_function(dec, 5.0);
    CHECK((phi.array() - 11.0 / kTau).abs().maxCoeff() <= 1e-9);
  }
  SUBCASE("below the spectral gap only the constant mode survives") {
    const Eigen::VectorXd phi = spectral_function(dec, 0.5);
    CHECK((phi.array() - 1.0 / space.total_measure()).abs().maxCoeff() <=
          1e-10);
  }
  SUBCASE("mu-integral equals the counting function at s^2") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> s_dist(0.5, 25.0);
    for (int trial = 0; trial < 12; ++trial) {
      const double s = s_dist(rng);
      const double integral = spectral_function(dec, s).dot(space.measure());
      CHECK(integral ==
            doctest::Approx(counting(dec, s * s)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Gaussian envelope on the dense circle") {
  const Instance& inst = circle1024();
  const SpectralDecomposition& dec = dec1024();
  GaussianFitOptions opt;
  opt.capture_samples = true;
  const GaussianFit fit =
      gaussian_fit(dec, *inst.space, log_grid(4e-3, 5e-2, 7), 8.0, opt);

  // Continuum kernel (4 pi t)^{-1/2} e^{-d^2/4t} against arc volume 2 sqrt(t)
  // gives G = e^{-u/4} / sqrt(pi); rates bracket 1/4.
  CHECK(fit.c2 <= fit.c1);
  CHECK(fit.c1 >= 0.2);
  CHECK(fit.c1 <= 0.3);
  CHECK(fit.c2 >= 0.2);
  CHECK(fit.c2 <= 0.3);
  CHECK(fit.C1 <= fit.C2);
  CHECK(fit.excluded_fraction <= 0.05);
  CHECK(fit.diag_max / fit.diag_min <= 4.0);

  SUBCASE("the envelope dominates every retained sample") {
    for (const auto& s : fit.samples) {
      const double u = s[3], g = s[7];
      CHECK(g <= fit.C2 * std::exp(-fit.c2 * u) * (1.0 + 1e-9));
      CHECK(g >= fit.C1 * std::exp(-fit.c1 * u) * (1.0 - 1e-9));
    }
  }
  SUBCASE("diagonal samples sit inside the amplitude band") {
    for (const auto& s : fit.samples) {
      if (s[3] != 0.0) continue;
      CHECK(s[7] >= fit.C1 * (1.0 - 1e-9));
      CHECK(s[7] <= fit.C2 * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("torus diagonal comparability band stays under a factor 4") {
  const Instance inst = make_torus2(32, 32, kTau, kTau);
  const SpectralDecomposition dec = decompose(inst.op);
  const GaussianFit fit =
      gaussian_fit(dec, *inst.space, log_grid(0.045, 0.12, 5), 4.0);
  CHECK(fit.diag_max / fit.diag_min <= 4.0);
  CHECK(fit.excluded_fraction <= 0.05);
}

TEST_CASE("gaussian fit argument validation") {
  const SpectralDecomposition& dec = dec1024();
  const MetricMeasureSpace& space = *circle1024().space;
  CHECK_THROWS_AS(gaussian_fit(dec, space, {}, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_fit(dec, space, {-0.1}, 8.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gaussian_fit(dec, space, {0.01}, -2.0),
                  std::invalid_argument);
}

TEST_CASE("spectral-function comparability on the circle") {
  const SpectralDecomposition& dec = dec1024();
  const MetricMeasureSpace& space = *circle1024().space;
  const SpectralFunctionBound rep =
      lemma_key_check(dec, space, log_grid(5.0, 20.0, 6), 3);
  // |B(x, 1/s)| Phi_s(x) = (2/s)(2 floor(s) + 1)/(2 pi) up to discreteness,
  // hovering around 2/pi.
  CHECK(rep.worst_ratio <= 1.5);
  CHECK(rep.a1 > 0.3);
  CHECK(rep.a2 < 1.2);
  CHECK(rep.cutoff_violations == 0);
  CHECK(rep.dyadic_violations == 0);
  CHECK(rep.skipped == 0);
}

TEST_CASE("cutoff bound is sharp at lambda = s") {
  // chi(s) = 1 and e * e^{-1} = 1: equality within floating error.
  CHECK(std::exp(1.0) * std::exp(-1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("lemma-key check skips sub-resolution scales") {
  const Instance inst = make_circle(64, kTau);
  const SpectralDecomposition dec = decompose(inst.op);
  // 1/s far below the spacing: every ball is a bare center, all skipped.
  const SpectralFunctionBound rep =
      lemma_key_check(dec, *inst.space, {1000.0}, 5);
  CHECK(rep.skipped == 64);
  CHECK(std::isinf(rep.worst_ratio));
}
