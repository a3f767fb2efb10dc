// Command-line front end: generate instances, cache spectra, sweep lattices,
// fit heat-kernel envelopes and run the full weak-Weyl verification pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "wwl/harness.hpp"
#include "wwl/io.hpp"

namespace fs = std::filesystem;
using namespace wwl;

namespace {

struct GlobalArgs {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  int threads = 1;
};

Config load_config(const GlobalArgs& g) {
  if (g.config.empty())
    throw ValidationError("--config is required for this command");
  return Config::parse_file(g.config);
}

HarnessOptions harness_options(const GlobalArgs& g) {
  HarnessOptions opt;
  opt.out_dir = g.out;
  opt.seed_override = g.seed;
  opt.threads = g.threads;
  return opt;
}

Instance build_instance(const Config& cfg, const GlobalArgs& g) {
  InstanceSpec spec = instance_spec_from(cfg);
  if (g.seed != 0) spec.seed = g.seed;
  return make_instance(spec);
}

int cmd_generate(const GlobalArgs& g) {
  const Config cfg = load_config(g);
  const Instance inst = build_instance(cfg, g);
  fs::create_directories(g.out);
  const fs::path space_path = fs::path(g.out) / "space.json";
  save_space(*inst.space, space_path.string());
  save_operator(inst.op, "space.json",
                (fs::path(g.out) / "operator.json").string());
  std::printf("wrote %s (%d points, total measure %.12g)\n",
              space_path.string().c_str(), inst.space->point_count(),
              inst.space->total_measure());
  return 0;
}

int cmd_spectrum(const GlobalArgs& g) {
  const Config cfg = load_config(g);
  const Instance inst = build_instance(cfg, g);
  const std::string key = operator_content_hash(inst.op);
  fs::create_directories(g.out);
  if (auto cached = load_spectrum(inst.space, g.out, key)) {
    std::printf("cache hit %s (%d eigenvalues)\n", key.c_str(),
                cached->size());
    return 0;
  }
  const SpectralDecomposition dec = decompose(inst.op);
  save_spectrum(dec, g.out, key);
  std::printf("decomposed %d modes; lambda_max = %.6g; cached as %s\n",
              dec.size(), dec.eigenvalues[dec.size() - 1], key.c_str());
  return 0;
}

int cmd_lattice(const GlobalArgs& g, double rho, int trials) {
  const Config cfg = load_config(g);
  const Instance inst = build_instance(cfg, g);
  if (rho <= 0.0) rho = inst.space->diameter() / 8.0;
  const DoublingEstimate d =
      doubling_estimate(*inst.space, doubling_default_grid(*inst.space));
  const SweepResult sweep =
      cardinality_sweep(*inst.space, rho, trials,
                        derive_seed(instance_spec_from(cfg).seed, 5),
                        g.threads);
  const Lattice lat = build_lattice(*inst.space, rho, LatticeOrder::index);
  const LatticeReport rep = verify_lattice(*inst.space, lat, d.exponent);
  fs::create_directories(g.out);
  save_lattice(lat, (fs::path(g.out) / "lattice.json").string());
  std::printf(
      "rho=%.6g card[min,max]=[%d,%d] multiplicity=%d bound=%.3g %s%s\n", rho,
      sweep.min_card, sweep.max_card, rep.measured_multiplicity,
      rep.multiplicity_bound, rep.ok ? "ok" : rep.violated_clause.c_str(),
      sweep.below_resolution ? " (below 4x resolution)" : "");
  return rep.ok ? 0 : 1;
}

int cmd_poincare(const GlobalArgs& g, double rho) {
  const Config cfg = load_config(g);
  const Instance inst = build_instance(cfg, g);
  if (rho <= 0.0) rho = inst.space->diameter() / 8.0;
  const PoincareProfile prof = poincare_profile(inst.op, rho, g.threads);
  fs::create_directories(g.out);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < prof.per_ball.size(); ++i)
    rows.push_back({static_cast<double>(i), prof.per_ball[i]});
  write_table((fs::path(g.out) / "poincare.tsv").string(),
              {"center", "constant"}, rows);
  std::printf("rho=%.6g sup C_B=%.6g disconnected=%d\n", rho,
              prof.sup_constant, prof.disconnected_count);
  return 0;
}

int cmd_heat(const GlobalArgs& g) {
  Config cfg = load_config(g);
  // Reuse the harness defaults but run only the heat-side checks.
  cfg.set("checks", "wwl", "off");
  cfg.set("checks", "weyl", "off");
  cfg.set("checks", "gradient", "off");
  cfg.set("checks", "poincare", "off");
  cfg.set("checks", "lattice", "off");
  cfg.set("checks", "bernstein", "off");
  cfg.set("checks", "frame", "off");
  const ExperimentResult res = run_experiment(cfg, harness_options(g));
  for (const CheckOutcome& c : res.checks)
    if (c.enabled)
      std::printf("%-10s %s  %s\n", c.name.c_str(),
                  c.passed ? "PASS" : "FAIL", c.detail.c_str());
  return res.all_passed() ? 0 : 1;
}

int cmd_verify_wwl(const GlobalArgs& g) {
  Config cfg = load_config(g);
  for (const char* name : {"weyl", "gradient", "poincare", "lattice",
                           "bernstein", "frame", "lemma_key", "gaussian"})
    cfg.set("checks", name, "off");
  cfg.set("checks", "wwl", "on");
  const ExperimentResult res = run_experiment(cfg, harness_options(g));
  for (const CheckOutcome& c : res.checks)
    if (c.enabled)
      std::printf("%-10s %s  %s\n", c.name.c_str(),
                  c.passed ? "PASS" : "FAIL", c.detail.c_str());
  return res.all_passed() ? 0 : 1;
}

int cmd_report(const GlobalArgs& g) {
  const Config cfg = load_config(g);
  const ExperimentResult res = run_experiment(cfg, harness_options(g));
  std::printf("instance %s  (doubling D=%.3g)\n", res.label.c_str(),
              res.doubling_exponent);
  for (const CheckOutcome& c : res.checks) {
    if (!c.enabled) continue;
    std::printf("%-10s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                c.detail.c_str());
  }
  std::printf("report written to %s\n",
              (fs::path(g.out) / "report.json").string().c_str());
  return res.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak Weyl law laboratory"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config, "experiment config file (INI)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "seed override (0 keeps config seed)");
  app.add_option("--threads", g.threads, "worker threads for sweeps");

  auto* generate = app.add_subcommand("generate", "emit space/operator files");
  auto* spectrum = app.add_subcommand("spectrum", "decompose and cache");
  double rho = 0.0;
  int trials = 16;
  auto* lattice = app.add_subcommand("lattice", "build and verify a lattice");
  lattice->add_option("--rho", rho, "lattice radius (default diameter/8)");
  lattice->add_option("--trials", trials, "random sweep trials");
  double prho = 0.0;
  auto* poincare = app.add_subcommand("poincare", "per-ball Poincare profile");
  poincare->add_option("--rho", prho, "ball radius (default diameter/8)");
  auto* heat = app.add_subcommand("heat", "Gaussian fit and kernel checks");
  auto* verify = app.add_subcommand("verify-wwl", "weak Weyl double inequality");
  auto* report = app.add_subcommand("report", "full pipeline and report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(g);
    if (spectrum->parsed()) return cmd_spectrum(g);
    if (lattice->parsed()) return cmd_lattice(g, rho, trials);
    if (poincare->parsed()) return cmd_poincare(g, prho);
    if (heat->parsed()) return cmd_heat(g);
    if (verify->parsed()) return cmd_verify_wwl(g);
    if (report->parsed()) return cmd_report(g);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
