// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Instances are desk-scale; the whole run takes a few minutes.

#include <cstdio>
#include <cmath>
#include <random>
#include <vector>

#include "wwl/harness.hpp"
#include "wwl/heat.hpp"
#include "wwl/instances.hpp"

using namespace wwl;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTau = 2.0 * kPi;

int g_failures = 0;

void report(int criterion, const char* name, bool pass,
            const std::string& detail) {
  std::printf("%s  criterion %d  %-22s %s\n", pass ? "PASS" : "FAIL",
              criterion, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// --- shared fixtures -------------------------------------------------------

struct Fixtures {
  Instance circle = make_circle(2048, kTau);
  SpectralDecomposition circle_dec = decompose(circle.op);
  Instance torus = make_torus2(64, 64, kTau, kTau);
  SpectralDecomposition torus_dec = decompose(torus.op);
  Instance sphere = make_sphere_mesh(2000, 0);
  SpectralDecomposition sphere_dec = decompose(sphere.op);
  SrSphereInstance sr = make_sr_sphere(4000, 40, 0);
  SpectralDecomposition sr_dec = decompose(sr.op);

  std::vector<double> spectrum_of(const SpectralDecomposition& dec) const {
    return std::vector<double>(dec.eigenvalues.data(),
                               dec.eigenvalues.data() + dec.size());
  }
};

// --- criteria ---------------------------------------------------------------

void criterion_1_weyl(const Fixtures& fx) {
  const WeylFit analytic =
      weyl_fit(circle_spectrum(kTau, 2e4), log_grid(1e2, 1e4, 25));
  const bool a = std::abs(analytic.slope - 0.5) <= 0.02;

  const WeylFit circle =
      weyl_fit(fx.spectrum_of(fx.circle_dec), log_grid(25.0, 400.0, 12));
  const bool b = std::abs(circle.slope - 0.5) <= 0.05;

  const WeylFit torus =
      weyl_fit(fx.spectrum_of(fx.torus_dec), log_grid(20.0, 200.0, 12));
  const bool c = std::abs(torus.slope - 1.0) <= 0.1;

  report(1, "weyl exponent", a && b && c,
         "analytic=" + fmt(analytic.slope) + " circle=" + fmt(circle.slope) +
             " torus=" + fmt(torus.slope));
}

void criterion_2_wwl(const Fixtures& fx) {
  const std::vector<double> gammas{0.5, 0.25, 0.1, 0.05, 0.02};
  bool pass = true;
  std::string detail;

  const WWLVerification circle =
      verify_wwl(fx.spectrum_of(fx.circle_dec), *fx.circle.space, "circle",
                 log_grid(25.0, 400.0, 10), gammas, 16, 101, 2);
  // sup-estimator ratio target on the circle is 1/pi (packing bound), and
  // the band must stay within a factor 3 end to end.
  const double target = 1.0 / kPi;
  const bool circle_ok = circle.upper_ok && circle.lower_ok &&
                         circle.ratio_stable &&
                         circle.ratio_min >= 0.7 * target &&
                         circle.ratio_max <= 1.3 * target;
  pass = pass && circle_ok;
  detail += "circle[c=" + fmt(circle.selected_c) +
            ",g=" + fmt(circle.selected_gamma) + ",r=" +
            fmt(circle.ratio_min) + ".." + fmt(circle.ratio_max) + "]";

  const WWLVerification torus =
      verify_wwl(fx.spectrum_of(fx.torus_dec), *fx.torus.space, "torus",
                 log_grid(20.0, 200.0, 8), gammas, 12, 103, 2);
  pass = pass && torus.upper_ok && torus.lower_ok && torus.ratio_stable;
  detail += " torus[c=" + fmt(torus.selected_c) +
            ",g=" + fmt(torus.selected_gamma) + "]";

  const WWLVerification sr =
      verify_wwl(fx.sr.oracle, *fx.sr.space, "sr_sphere",
                 log_grid(4.0, 36.0, 8), gammas, 12, 107, 2);
  pass = pass && sr.upper_ok && sr.lower_ok && sr.ratio_stable;
  detail += " sr[c=" + fmt(sr.selected_c) + ",g=" + fmt(sr.selected_gamma) +
            ",r=" + fmt(sr.ratio_min) + ".." + fmt(sr.ratio_max) + "]";

  report(2, "weak Weyl inequality", pass, detail);
}

void criterion_3_gamma(const Fixtures& fx) {
  bool pass = true;
  std::string detail;
  const struct {
    const char* name;
    const DirichletOperator* op;
  } cases[] = {{"circle", &fx.circle.op},
               {"torus", &fx.torus.op},
               {"sphere", &fx.sphere.op},
               {"sr", &fx.sr.op}};
  std::mt19937_64 rng(301);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& c : cases) {
    const int n = c.op->space().point_count();
    double worst_gap = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      Eigen::VectorXd f(n), g(n);
      for (int i = 0; i < n; ++i) {
        f[i] = gauss(rng);
        g[i] = gauss(rng);
      }
      const Eigen::VectorXd a = c.op->gamma(f, g);
      const Eigen::VectorXd b = c.op->gamma_edge(f, g);
      const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
      worst_gap =
          std::max(worst_gap, (a - b).cwiseAbs().maxCoeff() / scale);
    }
    const GradientBoundReport grad = check_gradient_bound(*c.op, 100, 311);
    const bool ok =
        worst_gap <= 1e-12 && std::abs(grad.c_measured - 1.0) <= 1e-10;
    pass = pass && ok;
    detail += std::string(c.name) + "[gap=" + fmt(worst_gap) +
              ",c-1=" + fmt(grad.c_measured - 1.0) + "] ";
  }
  report(3, "carre du champ", pass, detail);
}

void criterion_4_lemma_key(const Fixtures& fx) {
  const SpectralFunctionBound circle = lemma_key_check(
      fx.circle_dec, *fx.circle.space, log_grid(5.0, 30.0, 8), 401);
  const bool a = circle.worst_ratio <= 1.5 && circle.cutoff_violations == 0 &&
                 circle.dyadic_violations == 0;

  const SpectralFunctionBound torus = lemma_key_check(
      fx.torus_dec, *fx.torus.space, log_grid(2.5, 5.0, 6), 403);
  const bool b = torus.worst_ratio <= 4.0 && torus.cutoff_violations == 0 &&
                 torus.dyadic_violations == 0;

  const SpectralFunctionBound sr = lemma_key_check(
      fx.sr_dec, *fx.sr.space, log_grid(2.0, 5.0, 5), 405);
  const bool c = std::isfinite(sr.worst_ratio) && sr.worst_ratio > 0.0 &&
                 sr.cutoff_violations == 0 && sr.dyadic_violations == 0;

  report(4, "spectral-function band", a && b && c,
         "circle=" + fmt(circle.worst_ratio) + " torus=" +
             fmt(torus.worst_ratio) + " sr=" + fmt(sr.worst_ratio));
}

void criterion_5_frame(const Fixtures& fx) {
  bool pass = true;
  std::string detail;
  const struct {
    const char* name;
    const Instance* inst;
    const SpectralDecomposition* dec;
  } cases[] = {{"circle", &fx.circle, &fx.circle_dec},
               {"torus", &fx.torus, &fx.torus_dec}};
  for (const auto& c : cases) {
    for (double omega : {100.0, 400.0}) {
      const double rho = 0.1 / std::sqrt(omega);
      const Lattice lat =
          build_lattice(*c.inst->space, rho, LatticeOrder::index);
      const FrameBounds fb = frame_bound(*c.dec, omega, lat);
      pass = pass && fb.lower > 0.0;
      detail += std::string(c.name) + "@" + fmt(omega) + "=" +
                fmt(fb.lower) + " ";
    }
  }
  // deliberately non-covering: centers confined to one half of the circle
  {
    const double omega = 400.0;
    const double rho = 0.1 / std::sqrt(omega);
    const Lattice lat =
        build_lattice(*fx.circle.space, rho, LatticeOrder::index);
    std::vector<int> half;
    for (int c : lat.centers)
      if (fx.circle.space->distance(0, c) < kPi / 2.0) half.push_back(c);
    const FrameBounds broken = frame_bound(fx.circle_dec, omega, half, rho);
    pass = pass && broken.lower <= 1e-6;
    detail += "non-cover=" + fmt(broken.lower);
  }
  report(5, "frame bounds", pass, detail);
}

void criterion_6_gaussian(const Fixtures& fx) {
  bool pass = false;
  std::string detail;
  try {
    GaussianFitOptions opt;
    opt.seed = 601;
    const GaussianFit fit = gaussian_fit(
        fx.circle_dec, *fx.circle.space, log_grid(1e-3, 5e-2, 8), 8.0, opt);
    const double band = fit.diag_max / fit.diag_min;
    pass = fit.c2 <= fit.c1 && fit.c1 >= 0.2 && fit.c1 <= 0.3 &&
           fit.c2 >= 0.2 && fit.c2 <= 0.3 &&
           fit.excluded_fraction <= 0.05 && band <= 4.0;
    detail = "rates=[" + fmt(fit.c2) + "," + fmt(fit.c1) +
             "] excluded=" + fmt(fit.excluded_fraction) +
             " diag_band=" + fmt(band);
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(6, "gaussian envelope", pass, detail);
}

void criterion_7_sub_riemannian(const Fixtures& fx) {
  bool pass = true;
  std::string detail;

  // first nine eigenvalues against the l(l+1) - m^2 enumeration; the
  // equatorial family lambda = l interleaves, so the sorted oracle head is
  // {0, 1, 1, 2, 2, 2, 3, 3, 4}
  double worst = 0.0;
  for (int idx = 1; idx < 9; ++idx)
    worst = std::max(worst,
                     std::abs(fx.sr_dec.eigenvalues[idx] - fx.sr.oracle[idx]) /
                         fx.sr.oracle[idx]);
  pass = pass && std::abs(fx.sr_dec.eigenvalues[0]) <= 1e-8 && worst <= 0.02;
  detail += "eig_err=" + fmt(worst) + " ";

  // every l <= 2 mode {0,1,1,2,2,2,5,5,6} is present within 2%
  const std::vector<double> low = sr_sphere_spectrum(2);
  for (double lam : low) {
    if (lam == 0.0) continue;
    int hits = 0;
    for (int l = 0; l < fx.sr_dec.size(); ++l)
      if (std::abs(fx.sr_dec.eigenvalues[l] - lam) <= 0.02 * lam) ++hits;
    int want = 0;
    for (double v : low)
      if (v == lam) ++want;
    if (hits < want) {
      pass = false;
      detail += "missing lambda=" + fmt(lam) + " ";
    }
  }

  // CC-ball volume exponents at a pole and at the equator
  auto fit_exp = [&](int center, double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = 0; k < 8; ++k) {
      const double eps = lo * std::pow(hi / lo, k / 7.0);
      const double v = ball(*fx.sr.space, center, eps).volume;
      if (!(v > 0.0)) continue;
      const double x = std::log(eps), y = std::log(v);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  const double pole_exp = fit_exp(fx.sr.pole_index(), 0.15, 0.6);
  const double equator_exp = fit_exp(fx.sr.equator_index(), 0.33, 0.85);
  pass = pass && std::abs(pole_exp - 2.0) <= 0.3 &&
         std::abs(equator_exp - 3.0) <= 0.3;
  detail += "pole_exp=" + fmt(pole_exp) + " eq_exp=" + fmt(equator_exp) + " ";

  // metric sandwich a dist <= pi <= b sqrt(dist) on 1000 sampled pairs
  std::mt19937_64 rng(701);
  std::uniform_int_distribution<int> pick(0, 3999);
  double a_min = 1e300, b_max = 0.0;
  std::vector<std::pair<int, int>> pairs;
  while (pairs.size() < 1000) {
    const int i = pick(rng), j = pick(rng);
    if (i != j) pairs.emplace_back(i, j);
  }
  for (const auto& [i, j] : pairs) {
    const double cc = fx.sr.space->distance(i, j);
    const double riem = fx.sr.riem_distance(i, j);
    a_min = std::min(a_min, cc / riem);
    b_max = std::max(b_max, cc / std::sqrt(riem));
  }
  bool sandwich = a_min > 0.0 && std::isfinite(b_max);
  for (const auto& [i, j] : pairs) {
    const double cc = fx.sr.space->distance(i, j);
    const double riem = fx.sr.riem_distance(i, j);
    sandwich = sandwich && cc >= a_min * riem * (1.0 - 1e-12) &&
               cc <= b_max * std::sqrt(riem) * (1.0 + 1e-12);
  }
  pass = pass && sandwich;
  detail += "sandwich[a=" + fmt(a_min) + ",b=" + fmt(b_max) + "]";

  report(7, "sub-Riemannian sphere", pass, detail);
}

void criterion_8_lattice(const Fixtures& fx) {
  bool pass = true;
  std::string detail;
  const struct {
    const char* name;
    const MetricMeasureSpace* space;
  } cases[] = {{"circle", fx.circle.space.get()},
               {"torus", fx.torus.space.get()},
               {"sphere", fx.sphere.space.get()},
               {"sr", fx.sr.space.get()}};
  for (const auto& c : cases) {
    const DoublingEstimate d =
        doubling_estimate(*c.space, doubling_default_grid(*c.space, 8));
    int built = 0;
    double worst_mult = 0.0;
    const double bound = std::pow(80.0, d.exponent);
    for (int k = 2; k <= 5; ++k) {
      const double rho = c.space->diameter() / std::pow(2.0, k);
      if (rho < 2.0 * c.space->mesh_norm()) continue;
      for (int variant = 0; variant < 4; ++variant) {
        Lattice lat;
        if (variant == 0)
          lat = build_lattice(*c.space, rho, LatticeOrder::index);
        else if (variant == 1)
          lat = build_lattice(*c.space, rho, LatticeOrder::farthest_point);
        else
          lat = build_lattice(*c.space, rho, LatticeOrder::random,
                              801 + static_cast<std::uint64_t>(variant));
        const LatticeReport rep = verify_lattice(*c.space, lat, d.exponent);
        ++built;
        worst_mult = std::max(worst_mult,
                              static_cast<double>(rep.measured_multiplicity));
        if (!rep.ok || rep.measured_multiplicity > bound) pass = false;
      }
    }
    pass = pass && built > 0;
    detail += std::string(c.name) + "[D=" + fmt(d.exponent) +
              ",mult<=" + fmt(worst_mult) + "/" + fmt(bound) + "] ";
  }
  report(8, "lattice lemma", pass, detail);
}

void criterion_9_bernstein(const Fixtures& fx) {
  bool pass = true;
  std::string detail;
  // omega sits exactly on an eigenvalue so the top mode is sharp
  const double omega = fx.circle_dec.eigenvalues[fx.circle_dec.size() / 4];
  for (int k : {1, 2, 4}) {
    const BernsteinReport rep =
        bernstein_check(fx.circle_dec, omega, k, 200, 901 + k);
    pass = pass && rep.max_ratio <= 1.0 + 1e-8 &&
           rep.top_mode_ratio >= 1.0 - 1e-8;
    detail += "k" + std::to_string(k) + "=" + fmt(rep.max_ratio) + " ";
  }
  // and on the torus away from an eigenvalue the bound still holds
  const BernsteinReport torus =
      bernstein_check(fx.torus_dec, 150.0, 2, 200, 907);
  pass = pass && torus.max_ratio <= 1.0 + 1e-8;
  detail += "torus_k2=" + fmt(torus.max_ratio);
  report(9, "Bernstein inequality", pass, detail);
}

}  // namespace

int main() {
  std::printf("building fixtures (circle 2048, torus 64x64, sphere 2000, "
              "sub-Riemannian sphere 4000)...\n");
  std::fflush(stdout);
  const Fixtures fx;

  criterion_1_weyl(fx);
  criterion_2_wwl(fx);
  criterion_3_gamma(fx);
  criterion_4_lemma_key(fx);
  criterion_5_frame(fx);
  criterion_6_gaussian(fx);
  criterion_7_sub_riemannian(fx);
  criterion_8_lattice(fx);
  criterion_9_bernstein(fx);

  if (g_failures == 0)
    std::printf("acceptance: all 9 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
