#include "wwl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "wwl/io.hpp"
#include "wwl/svg.hpp"

namespace wwl {

namespace {
using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}
}  // namespace

bool WWLVerification::row_pass(std::size_t i) const {
  const WWLRow& r = rows.at(i);
  if (!(selected_c * r.max_card <= r.n_omega + 1e-9)) return false;
  if (selected_gamma <= 0.0) return false;
  const auto it =
      std::find(gamma_grid.begin(), gamma_grid.end(), selected_gamma);
  if (it == gamma_grid.end()) return false;
  const std::size_t gi = static_cast<std::size_t>(it - gamma_grid.begin());
  return r.n_omega <= r.min_card.at(gi);
}

WWLVerification verify_wwl(const std::vector<double>& spectrum,
                           const MetricMeasureSpace& space,
                           const std::string& label,
                           const std::vector<double>& omega_grid,
                           const std::vector<double>& gamma_grid, int trials,
                           std::uint64_t seed, int threads) {
  if (omega_grid.empty() || gamma_grid.empty())
    throw std::invalid_argument("weak-Weyl sweep needs omega and gamma grids");
  WWLVerification ver;
  ver.label = label;
  ver.gamma_grid = gamma_grid;

  const double mesh = space.mesh_norm();
  std::vector<double> omegas;
  for (double omega : omega_grid) {
    if (!(omega > 0.0))
      throw std::invalid_argument("omega grid must be positive");
    const double rho = 1.0 / std::sqrt(omega);
    if (rho < mesh)
      ver.dropped_omegas.push_back(omega);  // radius below resolution
    else
      omegas.push_back(omega);
  }
  ver.omega_grid = omegas;
  ver.rows.resize(omegas.size());

  parallel_for(omegas.size(), threads, [&](std::size_t i) {
    WWLRow row;
    row.omega = omegas[i];
    row.rho = 1.0 / std::sqrt(row.omega);
    row.n_omega = counting(spectrum, row.omega);
    row.flagged = row.rho < 4.0 * mesh;
    const SweepResult sup_sweep = cardinality_sweep(
        space, row.rho, trials, derive_seed(seed, i * 131), 1);
    row.max_card = sup_sweep.max_card;
    row.multiplicity = sup_sweep.max_multiplicity;
    row.min_card.resize(gamma_grid.size());
    for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
      const SweepResult inf_sweep =
          cardinality_sweep(space, gamma_grid[g] * row.rho, trials,
                            derive_seed(seed, i * 131 + g + 1), 1);
      row.min_card[g] = inf_sweep.min_card;
      row.multiplicity = std::max(row.multiplicity, inf_sweep.max_multiplicity);
    }
    ver.rows[i] = std::move(row);
  });

  if (ver.rows.empty()) return ver;

  for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
    bool feasible = true;
    for (const WWLRow& r : ver.rows)
      if (r.n_omega > r.min_card[g]) {
        feasible = false;
        break;
      }
    if (feasible && gamma_grid[g] > ver.selected_gamma)
      ver.selected_gamma = gamma_grid[g];
  }
  ver.upper_ok = ver.selected_gamma > 0.0;

  ver.ratio_min = std::numeric_limits<double>::infinity();
  double c_star = std::numeric_limits<double>::infinity();
  for (const WWLRow& r : ver.rows) {
    ver.max_multiplicity = std::max(ver.max_multiplicity, r.multiplicity);
    if (r.max_card <= 0) continue;
    const double ratio = static_cast<double>(r.n_omega) / r.max_card;
    ver.ratio_min = std::min(ver.ratio_min, ratio);
    ver.ratio_max = std::max(ver.ratio_max, ratio);
    c_star = std::min(c_star, ratio);
  }
  ver.selected_c = std::isfinite(c_star) ? std::min(c_star, 1.0 - 1e-9) : 0.0;
  ver.lower_ok = ver.selected_c > 0.0;
  ver.ratio_stable =
      ver.ratio_min > 0.0 && ver.ratio_max <= 3.0 * ver.ratio_min;
  return ver;
}

InstanceSpec instance_spec_from(const Config& cfg) {
  InstanceSpec spec;
  spec.kind = cfg.get("instance", "kind", "circle");
  spec.n = static_cast<int>(cfg.get_int("instance", "n", 512));
  spec.nx = static_cast<int>(cfg.get_int("instance", "nx", 32));
  spec.ny = static_cast<int>(cfg.get_int("instance", "ny", 32));
  spec.circumference = cfg.get_double("instance", "circumference",
                                      spec.circumference);
  spec.length = cfg.get_double("instance", "length", 1.0);
  spec.cx = cfg.get_double("instance", "cx", spec.cx);
  spec.cy = cfg.get_double("instance", "cy", spec.cy);
  spec.l_max = static_cast<int>(cfg.get_int("instance", "l_max", 20));
  spec.knn = static_cast<int>(cfg.get_int("instance", "knn", 18));
  spec.seed = static_cast<std::uint64_t>(cfg.get_int("instance", "seed", 1));
  spec.operator_file = cfg.get("instance", "operator_file", "");
  return spec;
}

bool ExperimentResult::all_passed() const {
  for (const CheckOutcome& c : checks)
    if (c.enabled && !c.passed) return false;
  return true;
}

namespace {

struct KindDefaults {
  double omega_min = 25.0, omega_max = 400.0;
  int omega_count = 10;
  bool has_weyl = true;
  double weyl_slope = 0.5, weyl_tol = 0.05;
  double s_min = 5.0, s_max = 30.0;
  int s_count = 8;
  double lemma_ratio_limit = 0.0;  // 0: only require a finite ratio
  double t_min = 1e-3, t_max = 5e-2;
  int t_count = 8;
  double d2t_cap = 8.0;
  bool gaussian_on = true;
  bool frame_on = true;
  bool poincare_on = true;
  std::string spectrum_source = "discrete";
};

KindDefaults defaults_for(const std::string& kind) {
  KindDefaults d;
  if (kind == "circle" || kind == "interval") {
    d.lemma_ratio_limit = 1.5;
    return d;
  }
  if (kind == "torus2") {
    d.omega_min = 20.0;
    d.omega_max = 200.0;
    d.weyl_slope = 1.0;
    d.weyl_tol = 0.1;
    d.s_min = 2.5;
    d.s_max = 5.0;
    d.s_count = 6;
    d.lemma_ratio_limit = 4.0;
    d.t_min = 0.015;
    d.t_max = 0.06;
    d.t_count = 6;
    d.d2t_cap = 6.0;
    return d;
  }
  if (kind == "sphere_mesh") {
    d.omega_min = 4.0;
    d.omega_max = 64.0;
    d.weyl_slope = 1.0;
    d.weyl_tol = 0.2;
    d.s_min = 2.0;
    d.s_max = 6.0;
    d.s_count = 5;
    d.gaussian_on = false;
    d.frame_on = false;
    return d;
  }
  if (kind == "sr_sphere") {
    d.omega_min = 4.0;
    d.omega_max = 36.0;
    d.omega_count = 8;
    d.has_weyl = false;
    d.s_min = 2.0;
    d.s_max = 5.0;
    d.s_count = 5;
    d.gaussian_on = false;
    d.frame_on = false;
    d.poincare_on = false;
    d.spectrum_source = "oracle";
    return d;
  }
  return d;
}

json wwl_to_json(const WWLVerification& v) {
  json out;
  out["label"] = v.label;
  out["gamma_grid"] = v.gamma_grid;
  out["selected_gamma"] = v.selected_gamma;
  out["selected_c"] = v.selected_c;
  out["ratio_min"] = v.ratio_min;
  out["ratio_max"] = v.ratio_max;
  out["max_multiplicity"] = v.max_multiplicity;
  out["upper_ok"] = v.upper_ok;
  out["lower_ok"] = v.lower_ok;
  out["ratio_stable"] = v.ratio_stable;
  out["dropped_omegas"] = v.dropped_omegas;
  json rows = json::array();
  for (std::size_t i = 0; i < v.rows.size(); ++i) {
    const WWLRow& r = v.rows[i];
    json row;
    row["omega"] = r.omega;
    row["rho"] = r.rho;
    row["n_omega"] = r.n_omega;
    row["max_card"] = r.max_card;
    row["min_card"] = r.min_card;
    row["multiplicity"] = r.multiplicity;
    row["flagged"] = r.flagged;
    row["pass"] = v.row_pass(i);
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const Config& cfg, const HarnessOptions& opt) {
  InstanceSpec spec = instance_spec_from(cfg);
  if (opt.seed_override != 0) spec.seed = opt.seed_override;
  const KindDefaults defs = defaults_for(spec.kind);

  ExperimentResult res;
  res.kind = spec.kind;
  res.seed = spec.seed;

  std::optional<SrSphereInstance> sr;
  Instance inst = [&]() {
    if (spec.kind == "sr_sphere") {
      sr = make_sr_sphere(spec.n, spec.l_max, spec.seed, spec.knn);
      return Instance{sr->space, sr->op};
    }
    return make_instance(spec);
  }();
  res.label = inst.space->label() + "/n=" +
              std::to_string(inst.space->point_count());

  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);

  auto enabled = [&cfg](const std::string& name, bool dflt) {
    return cfg.get_bool("checks", name, dflt);
  };
  auto push_check = [&res](const std::string& name, bool on, bool pass,
                           std::string detail) {
    res.checks.push_back({name, on, on && pass, std::move(detail)});
  };

  // Spectrum: discrete decomposition, plus the analytic one when configured.
  SpectralDecomposition dec = decompose(inst.op);
  std::vector<double> discrete_spectrum(
      dec.eigenvalues.data(), dec.eigenvalues.data() + dec.size());

  const std::string source =
      cfg.get("sweep", "spectrum", defs.spectrum_source);
  const double mesh = inst.space->mesh_norm();
  double omega_cap = std::numeric_limits<double>::infinity();
  if (source != "oracle" && mesh > 0.0) {
    // Discrete spectra flatten near the top of the band; fits and sweeps stay
    // below a quarter of the squared Nyquist frequency of the sample.
    const double nyquist = 3.14159265358979323846 / mesh;
    omega_cap = nyquist * nyquist / 4.0;
  }

  const double omega_min = cfg.get_double("sweep", "omega_min", defs.omega_min);
  const double omega_max = std::min(
      cfg.get_double("sweep", "omega_max", defs.omega_max), omega_cap);
  const int omega_count = static_cast<int>(
      cfg.get_int("sweep", "omega_count", defs.omega_count));
  const std::vector<double> omega_grid =
      log_grid(omega_min, std::max(omega_min, omega_max), omega_count);
  const std::vector<double> gamma_grid =
      cfg.get_list("sweep", "gamma_grid", {0.5, 0.25, 0.1, 0.05, 0.02});
  const int trials = static_cast<int>(cfg.get_int("sweep", "trials", 16));

  std::vector<double> sweep_spectrum = discrete_spectrum;
  if (source == "oracle") {
    if (spec.kind == "circle")
      sweep_spectrum = circle_spectrum(spec.circumference, omega_max * 2.0);
    else if (spec.kind == "interval")
      sweep_spectrum = interval_spectrum(spec.length, omega_max * 2.0);
    else if (spec.kind == "torus2")
      sweep_spectrum = torus2_spectrum(spec.cx, spec.cy, omega_max * 2.0);
    else if (spec.kind == "sr_sphere")
      sweep_spectrum = sr->oracle;
    else
      throw ValidationError("no analytic spectrum for kind " + spec.kind);
  }

  // Doubling exponent feeds the lattice multiplicity bound.
  const DoublingEstimate doubling =
      doubling_estimate(*inst.space, doubling_default_grid(*inst.space));
  res.doubling_exponent = doubling.exponent;

  // --- weak Weyl comparison ---
  if (enabled("wwl", true)) {
    res.wwl = verify_wwl(sweep_spectrum, *inst.space, res.label, omega_grid,
                         gamma_grid, trials, derive_seed(spec.seed, 11),
                         opt.threads);
    const bool pass =
        res.wwl->upper_ok && res.wwl->lower_ok && res.wwl->ratio_stable;
    push_check("wwl", true, pass,
               "gamma=" + fmt(res.wwl->selected_gamma) +
                   " c=" + fmt(res.wwl->selected_c) + " ratio=[" +
                   fmt(res.wwl->ratio_min) + "," + fmt(res.wwl->ratio_max) +
                   "]");
  } else {
    push_check("wwl", false, false, "disabled");
  }

  // --- Weyl exponent fit ---
  const bool weyl_on = enabled("weyl", defs.has_weyl);
  if (weyl_on) {
    const double want =
        cfg.get_double("checks", "weyl_slope", defs.weyl_slope);
    const double tol = cfg.get_double("checks", "weyl_tol", defs.weyl_tol);
    res.weyl = weyl_fit(sweep_spectrum, omega_grid);
    const bool pass = std::abs(res.weyl->slope - want) <= tol;
    push_check("weyl", true, pass,
               "slope=" + fmt(res.weyl->slope) + " target=" + fmt(want) +
                   "+-" + fmt(tol));
  } else {
    push_check("weyl", false, false, "disabled");
  }

  // --- carre du champ identities ---
  if (enabled("gradient", true)) {
    std::mt19937_64 rng(derive_seed(spec.seed, 23));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 16; ++t) {
      Eigen::VectorXd f(inst.space->point_count());
      Eigen::VectorXd g(inst.space->point_count());
      for (int i = 0; i < f.size(); ++i) {
        f[i] = gauss(rng);
        g[i] = gauss(rng);
      }
      const Eigen::VectorXd a = inst.op.gamma(f, g);
      const Eigen::VectorXd b = inst.op.gamma_edge(f, g);
      const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / scale);
    }
    res.gamma_identity_gap = worst;
    res.gradient =
        check_gradient_bound(inst.op, 100, derive_seed(spec.seed, 29));
    const bool pass =
        worst <= 1e-12 && std::abs(res.gradient.c_measured - 1.0) <= 1e-10;
    push_check("gradient", true, pass,
               "gamma_gap=" + fmt(worst) +
                   " c=" + fmt(res.gradient.c_measured));
  } else {
    push_check("gradient", false, false, "disabled");
  }

  // --- local Poincare profile ---
  if (enabled("poincare", defs.poincare_on)) {
    double rho = cfg.get_double("checks", "poincare_rho",
                                std::max(inst.space->diameter() / 8.0,
                                         4.0 * mesh));
    res.poincare = poincare_profile(inst.op, rho, opt.threads);
    const bool pass = res.poincare->sup_constant > 0.0 &&
                      std::isfinite(res.poincare->sup_constant);
    push_check("poincare", true, pass,
               "C=" + fmt(res.poincare->sup_constant) + " rho=" + fmt(rho) +
                   " disconnected=" +
                   std::to_string(res.poincare->disconnected_count));
  } else {
    push_check("poincare", false, false, "disabled");
  }

  // --- lattice structural checks ---
  if (enabled("lattice", true)) {
    bool all_ok = true;
    std::string detail;
    int built = 0;
    for (double rho :
         {inst.space->diameter() / 4.0, inst.space->diameter() / 8.0,
          inst.space->diameter() / 16.0, inst.space->diameter() / 32.0}) {
      if (rho < 2.0 * mesh) continue;
      for (int variant = 0; variant < 4; ++variant) {
        Lattice lat;
        if (variant == 0)
          lat = build_lattice(*inst.space, rho, LatticeOrder::index);
        else if (variant == 1)
          lat = build_lattice(*inst.space, rho, LatticeOrder::farthest_point);
        else
          lat = build_lattice(*inst.space, rho, LatticeOrder::random,
                              derive_seed(spec.seed, 37 + variant));
        const LatticeReport rep =
            verify_lattice(*inst.space, lat, res.doubling_exponent);
        ++built;
        if (!rep.ok) {
          all_ok = false;
          detail = "violated " + rep.violated_clause + " at rho=" + fmt(rho);
        }
      }
    }
    if (detail.empty())
      detail = std::to_string(built) + " lattices verified, D=" +
               fmt(res.doubling_exponent);
    push_check("lattice", true, all_ok && built > 0, detail);
  } else {
    push_check("lattice", false, false, "disabled");
  }

  // --- Bernstein inequality ---
  if (enabled("bernstein", true)) {
    const int idx = std::max(1, dec.size() / 4);
    const double omega = dec.eigenvalues[idx];
    bool pass = true;
    std::string detail = "omega=" + fmt(omega);
    for (int k : {1, 2, 4}) {
      const BernsteinReport rep =
          bernstein_check(dec, omega, k, 200, derive_seed(spec.seed, 41 + k));
      res.bernstein.emplace_back(k, rep);
      pass = pass && rep.max_ratio <= 1.0 + 1e-8 &&
             rep.top_mode_ratio >= 1.0 - 1e-8;
      detail += " k" + std::to_string(k) + "=" + fmt(rep.max_ratio);
    }
    push_check("bernstein", true, pass, detail);
  } else {
    push_check("bernstein", false, false, "disabled");
  }

  // --- frame bounds ---
  if (enabled("frame", defs.frame_on)) {
    std::vector<double> frame_omegas = cfg.get_list(
        "checks", "frame_omegas",
        {dec.eigenvalues[dec.size() / 64], dec.eigenvalues[dec.size() / 16]});
    const double gamma_f = cfg.get_double("checks", "frame_gamma", 0.1);
    bool pass = true;
    std::string detail;
    for (double omega : frame_omegas) {
      const double rho = gamma_f / std::sqrt(omega);
      const Lattice lat =
          build_lattice(*inst.space, rho, LatticeOrder::index);
      const FrameBounds fb = frame_bound(dec, omega, lat);
      res.frames.emplace_back(omega, fb);
      pass = pass && fb.lower > 0.0;
      detail += "omega=" + fmt(omega) + " lower=" + fmt(fb.lower) + " ";
    }
    push_check("frame", true, pass, detail);
  } else {
    push_check("frame", false, false, "disabled");
  }

  // --- spectral-function comparability ---
  if (enabled("lemma_key", true)) {
    const double s_min = cfg.get_double("checks", "s_min", defs.s_min);
    const double s_max = cfg.get_double("checks", "s_max", defs.s_max);
    const int s_count =
        static_cast<int>(cfg.get_int("checks", "s_count", defs.s_count));
    res.lemma_key = lemma_key_check(dec, *inst.space,
                                    log_grid(s_min, s_max, s_count),
                                    derive_seed(spec.seed, 53));
    const double limit =
        cfg.get_double("checks", "lemma_ratio_limit", defs.lemma_ratio_limit);
    bool pass = std::isfinite(res.lemma_key->worst_ratio) &&
                res.lemma_key->cutoff_violations == 0 &&
                res.lemma_key->dyadic_violations == 0;
    if (limit > 0.0) pass = pass && res.lemma_key->worst_ratio <= limit;
    push_check("lemma_key", true, pass,
               "ratio=" + fmt(res.lemma_key->worst_ratio) +
                   (limit > 0.0 ? " limit=" + fmt(limit) : ""));
  } else {
    push_check("lemma_key", false, false, "disabled");
  }

  // --- Gaussian envelope ---
  if (enabled("gaussian", defs.gaussian_on)) {
    const double t_min = cfg.get_double("checks", "t_min", defs.t_min);
    const double t_max = cfg.get_double("checks", "t_max", defs.t_max);
    const int t_count =
        static_cast<int>(cfg.get_int("checks", "t_count", defs.t_count));
    const double cap = cfg.get_double("checks", "d2t_cap", defs.d2t_cap);
    GaussianFitOptions gopt;
    gopt.seed = derive_seed(spec.seed, 59);
    gopt.capture_samples = true;
    bool pass = false;
    std::string detail;
    try {
      res.gaussian =
          gaussian_fit(dec, *inst.space, log_grid(t_min, t_max, t_count), cap,
                       gopt);
      const double band = res.gaussian->diag_max /
                          std::max(1e-300, res.gaussian->diag_min);
      pass = res.gaussian->c2 <= res.gaussian->c1 &&
             res.gaussian->excluded_fraction <= 0.05 && band <= 4.0;
      detail = "rates=[" + fmt(res.gaussian->c2) + "," +
               fmt(res.gaussian->c1) + "] diag_band=" + fmt(band) +
               " excluded=" + fmt(res.gaussian->excluded_fraction);
    } catch (const FitError& e) {
      detail = e.what();
    }
    push_check("gaussian", true, pass, detail);
  } else {
    push_check("gaussian", false, false, "disabled");
  }

  // --- artifacts ---
  {
    json report;
    report["label"] = res.label;
    report["kind"] = res.kind;
    report["seed"] = res.seed;
    report["doubling_exponent"] = res.doubling_exponent;
    report["spectrum_source"] = source;
    json checks = json::array();
    for (const CheckOutcome& c : res.checks) {
      json jc;
      jc["name"] = c.name;
      jc["enabled"] = c.enabled;
      jc["passed"] = c.passed;
      jc["detail"] = c.detail;
      checks.push_back(std::move(jc));
    }
    report["checks"] = std::move(checks);
    if (res.wwl) report["wwl"] = wwl_to_json(*res.wwl);
    if (res.weyl) {
      report["weyl"] = {{"slope", res.weyl->slope},
                        {"intercept", res.weyl->intercept},
                        {"r_squared", res.weyl->r_squared},
                        {"points", res.weyl->points_used}};
    }
    report["gamma_identity_gap"] = res.gamma_identity_gap;
    report["gradient_c"] = res.gradient.c_measured;
    if (res.poincare) {
      report["poincare"] = {
          {"rho", res.poincare->rho},
          {"sup_constant", res.poincare->sup_constant},
          {"disconnected", res.poincare->disconnected_count}};
    }
    if (res.lemma_key) {
      report["lemma_key"] = {{"a1", res.lemma_key->a1},
                             {"a2", res.lemma_key->a2},
                             {"worst_ratio", res.lemma_key->worst_ratio},
                             {"skipped", res.lemma_key->skipped}};
    }
    if (res.gaussian) {
      report["gaussian"] = {
          {"C1", res.gaussian->C1},         {"C2", res.gaussian->C2},
          {"c1", res.gaussian->c1},         {"c2", res.gaussian->c2},
          {"ls_rate", res.gaussian->ls_rate},
          {"r_squared", res.gaussian->residual_r2},
          {"excluded_fraction", res.gaussian->excluded_fraction},
          {"diag_min", res.gaussian->diag_min},
          {"diag_max", res.gaussian->diag_max}};
    }
    if (!res.bernstein.empty()) {
      json jb = json::array();
      for (const auto& [k, rep] : res.bernstein)
        jb.push_back({{"k", k},
                      {"max_ratio", rep.max_ratio},
                      {"top_mode_ratio", rep.top_mode_ratio},
                      {"dim", rep.dim}});
      report["bernstein"] = std::move(jb);
    }
    if (!res.frames.empty()) {
      json jf = json::array();
      for (const auto& [omega, fb] : res.frames)
        jf.push_back({{"omega", omega},
                      {"lower", fb.lower},
                      {"upper", fb.upper},
                      {"dim", fb.dim},
                      {"functionals", fb.functionals}});
      report["frames"] = std::move(jf);
    }
    report["all_passed"] = res.all_passed();
    std::ofstream out(out_dir / "report.json");
    out << report.dump(1) << "\n";
  }

  if (res.wwl) {
    std::vector<std::string> header{"omega", "rho", "n_omega", "max_card"};
    for (double g : res.wwl->gamma_grid)
      header.push_back("min_card_gamma_" + fmt(g));
    header.push_back("ratio");
    std::vector<std::vector<double>> rows;
    for (const WWLRow& r : res.wwl->rows) {
      std::vector<double> row{r.omega, r.rho,
                              static_cast<double>(r.n_omega),
                              static_cast<double>(r.max_card)};
      for (int m : r.min_card) row.push_back(m);
      row.push_back(r.max_card > 0
                        ? static_cast<double>(r.n_omega) / r.max_card
                        : 0.0);
      rows.push_back(std::move(row));
    }
    write_table((out_dir / "wwl.tsv").string(), header, rows);

    SvgPlot plot("weak Weyl comparison: " + res.label, "omega", "count");
    std::vector<double> xs, n_vals, max_vals, min_vals;
    const auto it = std::find(res.wwl->gamma_grid.begin(),
                              res.wwl->gamma_grid.end(),
                              res.wwl->selected_gamma);
    const std::size_t gi =
        it == res.wwl->gamma_grid.end()
            ? 0
            : static_cast<std::size_t>(it - res.wwl->gamma_grid.begin());
    for (const WWLRow& r : res.wwl->rows) {
      xs.push_back(r.omega);
      n_vals.push_back(r.n_omega);
      max_vals.push_back(r.max_card);
      min_vals.push_back(r.min_card.empty() ? 0.0 : r.min_card[gi]);
    }
    plot.add_series("N_omega", xs, n_vals);
    plot.add_series("max card @ rho", xs, max_vals);
    plot.add_series("min card @ gamma rho", xs, min_vals);
    plot.write((out_dir / "wwl.svg").string());
  }

  {
    std::vector<std::vector<double>> rows;
    for (double omega : omega_grid)
      rows.push_back({omega,
                      static_cast<double>(counting(sweep_spectrum, omega))});
    write_table((out_dir / "weyl.tsv").string(), {"omega", "n_omega"}, rows);
    SvgPlot plot("counting function: " + res.label, "omega", "N_omega");
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
      xs.push_back(r[0]);
      ys.push_back(r[1]);
    }
    plot.add_series("N_omega", xs, ys);
    if (res.weyl) {
      std::vector<double> fit_y;
      for (double x : xs)
        fit_y.push_back(std::exp(res.weyl->intercept +
                                 res.weyl->slope * std::log(x)));
      plot.add_series("fit slope " + fmt(res.weyl->slope), xs, fit_y);
    }
    plot.write((out_dir / "weyl.svg").string());
  }

  if (res.gaussian && !res.gaussian->samples.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : res.gaussian->samples)
      rows.emplace_back(s.begin(), s.end());
    write_table((out_dir / "gaussian_samples.tsv").string(),
                {"x", "y", "t", "d2_over_t", "p_t", "vol_x", "vol_y", "g"},
                rows);
    SvgPlot plot("Gaussian envelope: " + res.label, "d^2 / t",
                 "P_t sqrt(|B_x||B_y|)", /*log_x=*/false, /*log_y=*/true);
    std::vector<double> xs, ys;
    for (const auto& s : res.gaussian->samples) {
      xs.push_back(s[3]);
      ys.push_back(s[7]);
    }
    plot.add_series("samples", xs, ys, /*line=*/false);
    std::vector<double> ex, lo, hi;
    for (int k = 0; k <= 16; ++k) {
      const double u = res.gaussian->d2t_cap * k / 16.0;
      ex.push_back(u);
      lo.push_back(res.gaussian->C1 * std::exp(-res.gaussian->c1 * u));
      hi.push_back(res.gaussian->C2 * std::exp(-res.gaussian->c2 * u));
    }
    plot.add_series("lower envelope", ex, lo);
    plot.add_series("upper envelope", ex, hi);
    plot.write((out_dir / "gaussian.svg").string());
  }

  return res;
}

}  // namespace wwl
