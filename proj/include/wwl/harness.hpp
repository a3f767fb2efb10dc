#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wwl/config.hpp"
#include "wwl/dirichlet.hpp"
#include "wwl/heat.hpp"
#include "wwl/instances.hpp"
#include "wwl/lattice.hpp"
#include "wwl/spectral.hpp"

namespace wwl {

/// One omega row of the weak-Weyl comparison
///   c * max_card(X_{omega^{-1/2}}) <= N_omega <= min_card(X_{gamma omega^{-1/2}}).
struct WWLRow {
  double omega = 0.0;
  double rho = 0.0;  // omega^{-1/2}
  int n_omega = 0;
  int max_card = 0;               // sup-estimator over greedy strategies
  std::vector<int> min_card;      // per gamma_grid entry, inf-estimator
  int multiplicity = 0;           // max cover multiplicity seen at this row
  bool flagged = false;           // rho below 4x sampling resolution
};

struct WWLVerification {
  std::string label;
  std::vector<double> omega_grid;  // after the reliability drops
  std::vector<double> gamma_grid;
  std::vector<WWLRow> rows;
  std::vector<double> dropped_omegas;  // radius below sampling resolution
  double selected_gamma = 0.0;  // largest grid value feasible at every row
  double selected_c = 0.0;      // min over rows of N_omega / max_card, < 1
  double ratio_min = 0.0;       // N_omega / max_card across rows
  double ratio_max = 0.0;
  int max_multiplicity = 0;
  bool upper_ok = false;   // some gamma works at every row
  bool lower_ok = false;   // selected_c > 0
  bool ratio_stable = false;  // ratio_max <= 3 ratio_min

  bool row_pass(std::size_t i) const;
};

/// Runs the cardinality sweeps against the given ascending spectrum. The
/// spectrum may come from the discrete decomposition or from an analytic
/// oracle; lattices always live on the given space.
WWLVerification verify_wwl(const std::vector<double>& spectrum,
                           const MetricMeasureSpace& space,
                           const std::string& label,
                           const std::vector<double>& omega_grid,
                           const std::vector<double>& gamma_grid, int trials,
                           std::uint64_t seed, int threads = 1);

struct CheckOutcome {
  std::string name;
  bool enabled = false;
  bool passed = false;
  std::string detail;
};

struct HarnessOptions {
  std::string out_dir = "out";
  std::uint64_t seed_override = 0;  // 0 keeps the config seed
  int threads = 1;
};

struct ExperimentResult {
  std::string label;
  std::string kind;
  std::uint64_t seed = 0;
  std::vector<CheckOutcome> checks;

  double doubling_exponent = 0.0;
  std::optional<WWLVerification> wwl;
  std::optional<WeylFit> weyl;
  double gamma_identity_gap = 0.0;
  GradientBoundReport gradient;
  std::optional<PoincareProfile> poincare;
  std::optional<SpectralFunctionBound> lemma_key;
  std::optional<GaussianFit> gaussian;
  std::vector<std::pair<int, BernsteinReport>> bernstein;  // (k, report)
  std::vector<std::pair<double, FrameBounds>> frames;      // (omega, bounds)

  bool all_passed() const;
};

/// Executes the configured pipeline (generate -> decompose -> sweeps ->
/// checks -> report) and writes report.json, delimited tables and SVG plots
/// into the output directory. Deterministic for fixed config and seeds.
ExperimentResult run_experiment(const Config& cfg,
                                const HarnessOptions& opt = {});

/// Parses the [instance] section.
InstanceSpec instance_spec_from(const Config& cfg);

}  // namespace wwl
