#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wwl/space.hpp"

namespace wwl {

/// A metric (rho, N)-lattice: centers pairwise >= rho apart (so their rho/2
/// balls are disjoint) whose open rho-balls cover the space with bounded
/// multiplicity.
struct Lattice {
  double rho = 0.0;
  std::vector<int> centers;
  int multiplicity = 0;  // max over points of #{ centers within < rho }
  std::uint64_t strategy_seed = 0;
};

enum class LatticeOrder { index, random, farthest_point };

/// Greedy maximal packing: candidates are visited in the given order and
/// accepted iff at distance >= rho from every accepted center. Maximality of
/// the packing forces the radius-rho cover. Ties in farthest-point traversal
/// break toward the lowest index, so runs are reproducible for a fixed seed.
Lattice build_lattice(const MetricMeasureSpace& space, double rho,
                      LatticeOrder order, std::uint64_t seed = 0);

/// Structural verification result; `ok` is false with the violated clause and
/// witness indices when any lattice invariant fails.
struct LatticeReport {
  bool ok = true;
  std::string violated_clause;         // "separation" | "cover" | "multiplicity"
  std::array<int, 2> witness = {-1, -1};
  int measured_multiplicity = 0;
  double multiplicity_bound = 0.0;     // 80^D
  double min_center_distance = 0.0;
  double max_cover_distance = 0.0;     // max over points of nearest-center dist
};

LatticeReport verify_lattice(const MetricMeasureSpace& space,
                             const Lattice& lattice,
                             double doubling_exponent);

/// Min/max cardinality over `trials` random greedy orderings plus the index
/// and farthest-point strategies; estimators for inf/sup over all lattices of
/// the given radius.
struct SweepResult {
  int min_card = 0;
  int max_card = 0;
  std::vector<int> cards;     // per-trial cardinalities (index, fps, random...)
  int max_multiplicity = 0;   // across all built lattices
  bool below_resolution = false;  // rho < 4 * mesh norm of the sample
};

SweepResult cardinality_sweep(const MetricMeasureSpace& space, double rho,
                              int trials, std::uint64_t seed = 1,
                              int threads = 1);

}  // namespace wwl
