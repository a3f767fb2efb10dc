#include "wwl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wwl/common.hpp"

namespace wwl {

namespace {

std::vector<int> index_order(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

std::vector<int> random_order(int n, std::uint64_t seed) {
  std::vector<int> order = index_order(n);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

// Farthest-point traversal from point 0; ties break to the lowest index.
std::vector<int> farthest_point_order(const MetricMeasureSpace& space) {
  const int n = space.point_count();
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  std::vector<double> dist(static_cast<std::size_t>(n),
                           std::numeric_limits<double>::infinity());
  int current = 0;
  for (int step = 0; step < n; ++step) {
    order.push_back(current);
    taken[static_cast<std::size_t>(current)] = 1;
    int next = -1;
    double best = -1.0;
    for (int j = 0; j < n; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      dist[static_cast<std::size_t>(j)] = std::min(
          dist[static_cast<std::size_t>(j)], space.distance(current, j));
      if (dist[static_cast<std::size_t>(j)] > best) {
        best = dist[static_cast<std::size_t>(j)];
        next = j;
      }
    }
    if (next < 0) break;
    current = next;
  }
  return order;
}

int cover_multiplicity(const MetricMeasureSpace& space,
                       const std::vector<int>& centers, double rho) {
  const int n = space.point_count();
  int worst = 0;
  for (int p = 0; p < n; ++p) {
    int hits = 0;
    for (int c : centers)
      if (space.distance(p, c) < rho) ++hits;
    worst = std::max(worst, hits);
  }
  return worst;
}

}  // namespace

Lattice build_lattice(const MetricMeasureSpace& space, double rho,
                      LatticeOrder order, std::uint64_t seed) {
  if (!(rho > 0.0)) throw std::invalid_argument("lattice rho must be positive");
  std::vector<int> visit;
  switch (order) {
    case LatticeOrder::index:
      visit = index_order(space.point_count());
      break;
    case LatticeOrder::random:
      visit = random_order(space.point_count(), seed);
      break;
    case LatticeOrder::farthest_point:
      visit = farthest_point_order(space);
      break;
  }
  Lattice lat;
  lat.rho = rho;
  lat.strategy_seed = seed;
  for (int p : visit) {
    bool clear = true;
    for (int c : lat.centers) {
      if (space.distance(p, c) < rho) {
        clear = false;
        break;
      }
    }
    if (clear) lat.centers.push_back(p);
  }
  lat.multiplicity = cover_multiplicity(space, lat.centers, rho);
  return lat;
}

LatticeReport verify_lattice(const MetricMeasureSpace& space,
                             const Lattice& lattice,
                             double doubling_exponent) {
  LatticeReport rep;
  rep.multiplicity_bound = std::pow(80.0, doubling_exponent);
  const auto& ctr = lattice.centers;
  if (ctr.empty()) {
    rep.ok = false;
    rep.violated_clause = "cover";
    return rep;
  }

  rep.min_center_distance = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < ctr.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      const double d = space.distance(ctr[a], ctr[b]);
      if (d < rep.min_center_distance) {
        rep.min_center_distance = d;
        if (d < lattice.rho) {
          rep.ok = false;
          rep.violated_clause = "separation";
          rep.witness = {ctr[a], ctr[b]};
        }
      }
    }
  if (ctr.size() == 1) rep.min_center_distance = space.diameter();
  if (!rep.ok) return rep;

  for (int p = 0; p < space.point_count(); ++p) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int c : ctr) nearest = std::min(nearest, space.distance(p, c));
    rep.max_cover_distance = std::max(rep.max_cover_distance, nearest);
    if (!(nearest < lattice.rho)) {
      rep.ok = false;
      rep.violated_clause = "cover";
      rep.witness = {p, -1};
      return rep;
    }
  }

  rep.measured_multiplicity = cover_multiplicity(space, ctr, lattice.rho);
  if (rep.measured_multiplicity != lattice.multiplicity ||
      rep.measured_multiplicity > rep.multiplicity_bound) {
    rep.ok = false;
    rep.violated_clause = "multiplicity";
  }
  return rep;
}

SweepResult cardinality_sweep(const MetricMeasureSpace& space, double rho,
                              int trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw std::invalid_argument("sweep needs trials >= 1");
  const std::size_t total = static_cast<std::size_t>(trials) + 2;
  std::vector<Lattice> lattices(total);
  parallel_for(total, threads, [&](std::size_t i) {
    if (i == 0)
      lattices[i] = build_lattice(space, rho, LatticeOrder::index);
    else if (i == 1)
      lattices[i] = build_lattice(space, rho, LatticeOrder::farthest_point);
    else
      lattices[i] = build_lattice(space, rho, LatticeOrder::random,
                                  derive_seed(seed, i - 2));
  });
  SweepResult out;
  out.cards.reserve(total);
  out.min_card = std::numeric_limits<int>::max();
  for (const auto& lat : lattices) {
    const int card = static_cast<int>(lat.centers.size());
    out.cards.push_back(card);
    out.min_card = std::min(out.min_card, card);
    out.max_card = std::max(out.max_card, card);
    out.max_multiplicity = std::max(out.max_multiplicity, lat.multiplicity);
  }
  out.below_resolution = rho < 4.0 * space.mesh_norm();
  return out;
}

}  // namespace wwl
