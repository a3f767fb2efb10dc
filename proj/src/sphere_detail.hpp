#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

namespace wwl::detail {

/// Deterministic quasi-uniform spiral sample of the unit sphere; a nonzero
/// seed applies a random global rotation.
Eigen::MatrixX3d fibonacci_sphere(int n, std::uint64_t seed);

inline double great_circle(const Eigen::MatrixX3d& pts, int i, int j) {
  const double dot = std::clamp(pts.row(i).dot(pts.row(j)), -1.0, 1.0);
  return std::acos(dot);
}

}  // namespace wwl::detail
