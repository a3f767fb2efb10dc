#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wwl/dirichlet.hpp"

namespace wwl {

/// Parameters for the bundled example geometries; kind "file" ingests a
/// user-supplied operator document (which references its space file).
struct InstanceSpec {
  std::string kind;  // circle | interval | torus2 | sphere_mesh | sr_sphere | file
  int n = 512;
  int nx = 32, ny = 32;
  double circumference = 6.283185307179586476925287;
  double length = 1.0;
  double cx = 6.283185307179586476925287;
  double cy = 6.283185307179586476925287;
  int l_max = 20;
  int knn = 18;
  std::uint64_t seed = 1;
  std::string operator_file;
};

struct Instance {
  std::shared_ptr<const MetricMeasureSpace> space;
  DirichletOperator op;
};

/// Equispaced circle: geodesic metric, mu_i = h, nearest-neighbor
/// conductances 1/h. Discrete spectrum (4/h^2) sin^2(k h_ang / 2).
Instance make_circle(int n, double circumference);

/// Neumann interval with midpoint nodes; discrete spectrum
/// (4/h^2) sin^2(pi k / 2n).
Instance make_interval(int n, double length);

/// Product grid torus with wrapped product metric and 4-neighbor weights
/// scaled for consistency with the flat Laplacian.
Instance make_torus2(int nx, int ny, double cx, double cy);

/// Quasi-uniform spiral sample of the unit sphere, great-circle metric,
/// Gaussian-kernel neighborhood weights normalized so the operator is
/// consistent with the Laplace-Beltrami operator; mu_i = 4 pi / n.
/// seed != 0 applies a random global rotation to the sample. The kernel
/// bandwidth is bandwidth_scale * n^{-1/4}.
Instance make_sphere_mesh(int n, std::uint64_t seed = 0,
                          double bandwidth_scale = 0.03);

/// Sub-Riemannian sphere: horizontal fields Y1 = x2 d3 - x3 d2 and
/// Y2 = x1 d3 - x3 d1 assembled as first-order difference operators, the
/// operator mu-symmetrized from their squares, and a ball-box
/// Carnot-Caratheodory quasi-metric (Dijkstra over local edges whose cost is
/// the gauge max(|horizontal part|, |vertical part|^{1/2}) in the frame
/// {Y1, Y2, Y3 = [Y1, Y2]} at the edge midpoint).
struct SrSphereInstance {
  std::shared_ptr<const MetricMeasureSpace> space;  // CC quasi-metric
  DirichletOperator op;
  std::vector<double> oracle;                 // l(l+1) - m^2 up to l_max
  Eigen::MatrixX3d points;                    // unit vectors
  double mesh_norm_riem = 0.0;                // Riemannian nearest-neighbor max

  double riem_distance(int i, int j) const;   // great-circle distance
  int pole_index() const;                     // sample point nearest a pole
  int equator_index() const;                  // sample point nearest x3 = 0
};

SrSphereInstance make_sr_sphere(int n, int l_max, std::uint64_t seed = 0,
                                int knn = 18);

/// Ball-box Carnot-Caratheodory distances for an arbitrary unit-sphere
/// sample; the same construction make_sr_sphere uses for its quasi-metric.
Eigen::MatrixXd cc_ball_box_distances(const Eigen::MatrixX3d& points,
                                      int knn = 12);

/// Analytic spectra (ascending, with multiplicity).
std::vector<double> circle_spectrum(double circumference, double omega_max);
std::vector<double> interval_spectrum(double length, double omega_max);
std::vector<double> torus2_spectrum(double cx, double cy, double omega_max);
std::vector<double> sr_sphere_spectrum(int l_max);

/// Dispatch on spec.kind; sr_sphere instances lose their extras here, use
/// make_sr_sphere directly when those are needed.
Instance make_instance(const InstanceSpec& spec);

}  // namespace wwl
