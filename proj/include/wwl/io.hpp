#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wwl/dirichlet.hpp"
#include "wwl/lattice.hpp"
#include "wwl/spectral.hpp"

namespace wwl {

/// Space documents are JSON with fields `label`, `measure` and exactly one of
///   - `distance_matrix`: row-major strict lower triangle, or
///   - `coordinates` plus a `metric` tag: euclidean | circle_geodesic
///     (needs `circumference`) | sphere_geodesic | cc_ball_box.
/// Distances are open-ball distances: membership tests use d < r throughout.
std::shared_ptr<const MetricMeasureSpace> load_space(const std::string& path);

/// Writes the lower-triangle form (exact round trip for any space that holds
/// its matrix).
void save_space(const MetricMeasureSpace& space, const std::string& path);

struct CoordinateSpace {
  std::vector<std::vector<double>> coordinates;
  std::string metric;  // euclidean | circle_geodesic | sphere_geodesic | cc_ball_box
  double circumference = 0.0;
  std::vector<double> measure;
  std::string label;
};

/// Writes the coordinate form; the loader rebuilds distances from the tag.
void save_space_coordinates(const CoordinateSpace& doc,
                            const std::string& path);

/// Operator documents: conductance triples (i, j, w) plus a reference to the
/// space file they act on.
void save_operator(const DirichletOperator& op, const std::string& space_path,
                   const std::string& path);
DirichletOperator load_operator(const std::string& path);

void save_lattice(const Lattice& lattice, const std::string& path);
Lattice load_lattice(const MetricMeasureSpace& space, const std::string& path);

/// Content hash of an operator (point count, measure, conductances); keys the
/// spectrum cache.
std::string operator_content_hash(const DirichletOperator& op);

/// Spectrum cache: "<key>.eigs.txt" holds ascending eigenvalues one per line;
/// "<key>.evec.bin" optionally holds the eigenvector block (column-major
/// doubles behind a small header).
void save_spectrum(const SpectralDecomposition& dec, const std::string& dir,
                   const std::string& key, bool with_eigenvectors = true);
std::optional<SpectralDecomposition> load_spectrum(
    std::shared_ptr<const MetricMeasureSpace> space, const std::string& dir,
    const std::string& key);

/// Delimited table writer (tab-separated, fixed formatting so reruns are
/// byte-identical).
void write_table(const std::string& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

}  // namespace wwl
