#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <thread>
#include <vector>

#include "sphere_detail.hpp"
#include "wwl/common.hpp"
#include "wwl/instances.hpp"

namespace wwl {

namespace detail {

Eigen::MatrixX3d fibonacci_sphere(int n, std::uint64_t seed) {
  constexpr double kPi = 3.14159265358979323846;
  Eigen::MatrixX3d pts(n, 3);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    pts(k, 0) = r * std::cos(phi);
    pts(k, 1) = r * std::sin(phi);
    pts(k, 2) = z;
  }
  if (seed != 0) {
    // Random rotation from the QR factor of a Gaussian matrix.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = gauss(rng);
    const Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
    Eigen::Matrix3d q = qr.householderQ();
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    pts = pts * q.transpose();
  }
  return pts;
}

}  // namespace detail

namespace {

using Vec3 = Eigen::Vector3d;

// Rotation fields as vectors in R^3; all are tangent to the sphere.
Vec3 field_y1(const Vec3& x) { return {0.0, -x[2], x[1]}; }   // x2 d3 - x3 d2
Vec3 field_y2(const Vec3& x) { return {-x[2], 0.0, x[0]}; }   // x1 d3 - x3 d1
Vec3 field_y3(const Vec3& x) { return {-x[1], x[0], 0.0}; }   // [Y1, Y2]

// Orthonormal tangent basis at x.
void tangent_basis(const Vec3& x, Vec3& e1, Vec3& e2) {
  int k = 0;
  for (int a = 1; a < 3; ++a)
    if (std::abs(x[a]) < std::abs(x[k])) k = a;
  Vec3 axis = Vec3::Zero();
  axis[k] = 1.0;
  e1 = axis.cross(x).normalized();
  e2 = x.cross(e1);
}

// Log map of y at base x, in the (e1, e2) basis.
Eigen::Vector2d log_map(const Vec3& x, const Vec3& y, const Vec3& e1,
                        const Vec3& e2) {
  const double c = std::clamp(x.dot(y), -1.0, 1.0);
  const double theta = std::acos(c);
  Vec3 chord = y - c * x;
  const double norm = chord.norm();
  if (norm < 1e-15) return Eigen::Vector2d::Zero();
  chord *= theta / norm;
  return {chord.dot(e1), chord.dot(e2)};
}

// Symmetric k-nearest-neighbor lists by chord distance.
std::vector<std::vector<int>> knn_lists(const Eigen::MatrixX3d& pts, int k) {
  const int n = static_cast<int>(pts.rows());
  std::vector<std::vector<int>> nb(static_cast<std::size_t>(n));
  std::vector<std::pair<double, int>> cand(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      cand[static_cast<std::size_t>(j)] = {
          (pts.row(i) - pts.row(j)).squaredNorm(), j};
    cand[static_cast<std::size_t>(i)].first =
        std::numeric_limits<double>::infinity();
    const int take = std::min(k, n - 1);
    std::partial_sort(cand.begin(), cand.begin() + take, cand.end());
    for (int t = 0; t < take; ++t)
      nb[static_cast<std::size_t>(i)].push_back(
          cand[static_cast<std::size_t>(t)].second);
  }
  for (int i = 0; i < n; ++i)
    for (int j : nb[static_cast<std::size_t>(i)])
      if (std::find(nb[static_cast<std::size_t>(j)].begin(),
                    nb[static_cast<std::size_t>(j)].end(),
                    i) == nb[static_cast<std::size_t>(j)].end())
        nb[static_cast<std::size_t>(j)].push_back(i);
  for (auto& list : nb) std::sort(list.begin(), list.end());
  return nb;
}

// Weighted quadratic least-squares fit over a stencil; returns for each of
// the two tangent directions the coefficient row over (self, neighbors...)
// that evaluates the fitted gradient, plus an hourglass penalty built from
// the reconstruction residual. The penalty is O(h^4) on smooth functions
// (zero continuum footprint, so the rank drop of the horizontal frame is
// untouched) but prices grid-scale zigzags out of the low spectrum; without
// it the fitted gradients alias a large family of spurious near-null modes.
// Rows annihilate constants exactly.
struct GradientStencil {
  std::vector<int> nodes;   // stencil indices, nodes[0] = center
  Eigen::MatrixXd rows;     // 2 x nodes.size(): Y_a . fitted gradient
  Eigen::MatrixXd penalty;  // nodes x nodes PSD residual form, scaled 1/h^2
};

GradientStencil gradient_stencil(const Eigen::MatrixX3d& pts, int center,
                                 const std::vector<int>& neighbors) {
  GradientStencil st;
  st.nodes.push_back(center);
  for (int j : neighbors) st.nodes.push_back(j);
  const int m = static_cast<int>(st.nodes.size());

  Vec3 e1, e2;
  const Vec3 x = pts.row(center);
  tangent_basis(x, e1, e2);

  double scale = 0.0;
  std::vector<Eigen::Vector2d> u(static_cast<std::size_t>(m),
                                 Eigen::Vector2d::Zero());
  for (int a = 1; a < m; ++a) {
    u[static_cast<std::size_t>(a)] =
        log_map(x, pts.row(st.nodes[static_cast<std::size_t>(a)]), e1, e2);
    scale = std::max(scale, u[static_cast<std::size_t>(a)].norm());
  }
  if (!(scale > 0.0)) scale = 1.0;

  // Polynomial order picked by stencil size: cubic needs 10 coefficients.
  const int p = m >= 16 ? 10 : (m >= 10 ? 6 : 3);
  Eigen::MatrixXd X(m, p);
  Eigen::VectorXd w(m);
  for (int a = 0; a < m; ++a) {
    const Eigen::Vector2d v = u[static_cast<std::size_t>(a)] / scale;
    X(a, 0) = 1.0;
    X(a, 1) = v[0];
    X(a, 2) = v[1];
    if (p >= 6) {
      X(a, 3) = v[0] * v[0];
      X(a, 4) = v[0] * v[1];
      X(a, 5) = v[1] * v[1];
    }
    if (p >= 10) {
      X(a, 6) = v[0] * v[0] * v[0];
      X(a, 7) = v[0] * v[0] * v[1];
      X(a, 8) = v[0] * v[1] * v[1];
      X(a, 9) = v[1] * v[1] * v[1];
    }
    w[a] = std::exp(-1.5 * v.squaredNorm());
  }
  const Eigen::MatrixXd Xw = w.asDiagonal() * X;
  const Eigen::MatrixXd normal = X.transpose() * Xw;
  const Eigen::MatrixXd coef =
      normal.ldlt().solve(Xw.transpose());  // p x m, rows = model coefficients

  // Gradient in the (e1, e2) basis, undoing the stencil normalization.
  Eigen::MatrixXd grad_rows = coef.middleRows(1, 2) / scale;

  // Express the fields in that basis at the center.
  Eigen::Matrix2d fields;
  fields << field_y1(x).dot(e1), field_y2(x).dot(e1), field_y1(x).dot(e2),
      field_y2(x).dot(e2);
  st.rows = fields.transpose() * grad_rows;  // row a = Y_a . grad

  // Residual of the local reconstruction; constants reproduce exactly, so
  // the penalty keeps zero row sums.
  const Eigen::MatrixXd residual =
      Eigen::MatrixXd::Identity(m, m) - X * coef;
  st.penalty = residual.transpose() * w.asDiagonal() * residual /
               (scale * scale);
  return st;
}

// Ball-box gauge cost of moving by the tangent displacement delta at m:
// the smallest eps admitting delta = h1 Y1 + h2 Y2 + h3 Y3 with
// |(h1,h2)| <= eps and |h3| <= eps^2.
double gauge_cost(const Vec3& mid, const Eigen::Vector2d& delta) {
  Vec3 e1, e2;
  tangent_basis(mid, e1, e2);
  Eigen::Matrix2d G;
  G << field_y1(mid).dot(e1), field_y2(mid).dot(e1), field_y1(mid).dot(e2),
      field_y2(mid).dot(e2);
  const Eigen::Vector2d y3{field_y3(mid).dot(e1), field_y3(mid).dot(e2)};

  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(
      G, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tiny = 1e-10 * std::max(1.0, sv[0]);

  auto horizontal_norm = [&](const Eigen::Vector2d& w) {
    // Minimal-norm horizontal coefficients with G h = w; infeasible
    // components (rank drop at the equator) price as infinity.
    const Eigen::Vector2d uw = svd.matrixU().transpose() * w;
    double nrm2 = 0.0;
    for (int a = 0; a < 2; ++a) {
      if (sv[a] > tiny)
        nrm2 += (uw[a] / sv[a]) * (uw[a] / sv[a]);
      else if (std::abs(uw[a]) > 1e-12)
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(nrm2);
  };

  // Vertical coefficient that exactly cancels the weak singular direction.
  double h3_full = 0.0;
  {
    const Eigen::Vector2d u_weak = svd.matrixU().col(1);
    const double denom = u_weak.dot(y3);
    if (std::abs(denom) > 1e-12) h3_full = u_weak.dot(delta) / denom;
  }

  double best = std::numeric_limits<double>::infinity();
  const int steps = 48;
  for (int k = 0; k <= steps; ++k) {
    const double h3 = h3_full * (static_cast<double>(k) / steps);
    const double eps =
        std::max(horizontal_norm(delta - h3 * y3), std::sqrt(std::abs(h3)));
    best = std::min(best, eps);
  }
  // Pure vertical route for displacements aligned with Y3.
  const double y3n2 = y3.squaredNorm();
  if (y3n2 > 1e-20) {
    const double h3 = y3.dot(delta) / y3n2;
    const double eps =
        std::max(horizontal_norm(delta - h3 * y3), std::sqrt(std::abs(h3)));
    best = std::min(best, eps);
  }
  return best;
}

double edge_gauge(const Eigen::MatrixX3d& pts, int i, int j) {
  const Vec3 xi = pts.row(i), xj = pts.row(j);
  Vec3 mid = xi + xj;
  const double mn = mid.norm();
  if (mn < 1e-12) return std::numeric_limits<double>::infinity();
  mid /= mn;
  Vec3 e1, e2;
  tangent_basis(mid, e1, e2);
  const Eigen::Vector2d delta =
      log_map(mid, xj, e1, e2) - log_map(mid, xi, e1, e2);
  return gauge_cost(mid, delta);
}

// Quasi-metric by Dijkstra over gauge-priced hops. Gauge costs compose
// additively along a path while the vertical budget of the control problem
// composes as sqrt of the sum, so chained short hops overprice moves in the
// commutator direction; single hops between nearly equal latitudes keep the
// sqrt pricing available at every scale, hence the same-latitude band edges
// on top of the nearest-neighbor graph.
Eigen::MatrixXd cc_distances(const Eigen::MatrixX3d& pts,
                             const std::vector<std::vector<int>>& nb,
                             double z_band) {
  const int n = static_cast<int>(pts.rows());
  std::vector<std::vector<std::pair<int, double>>> adj(
      static_cast<std::size_t>(n));
  auto add_edge = [&](int i, int j) {
    const double cost = edge_gauge(pts, i, j);
    if (!std::isfinite(cost)) return;
    adj[static_cast<std::size_t>(i)].push_back({j, cost});
    adj[static_cast<std::size_t>(j)].push_back({i, cost});
  };
  for (int i = 0; i < n; ++i)
    for (int j : nb[static_cast<std::size_t>(i)])
      if (j > i) add_edge(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(pts(i, 2) - pts(j, 2)) > z_band) continue;
      const auto& list = nb[static_cast<std::size_t>(i)];
      if (std::find(list.begin(), list.end(), j) != list.end()) continue;
      add_edge(i, j);
    }

  Eigen::MatrixXd dist(n, n);
  const double inf = std::numeric_limits<double>::infinity();
  std::atomic<bool> disconnected{false};
  const int workers = std::min(8u, std::thread::hardware_concurrency());
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t src) {
    std::vector<double> d(static_cast<std::size_t>(n), inf);
    d[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, static_cast<int>(src)});
    while (!heap.empty()) {
      const auto [dv, v] = heap.top();
      heap.pop();
      if (dv > d[static_cast<std::size_t>(v)]) continue;
      for (const auto& [w, cost] : adj[static_cast<std::size_t>(v)]) {
        const double cand = dv + cost;
        if (cand < d[static_cast<std::size_t>(w)]) {
          d[static_cast<std::size_t>(w)] = cand;
          heap.push({cand, w});
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(d[static_cast<std::size_t>(j)]))
        disconnected.store(true);
      dist(static_cast<int>(src), j) = d[static_cast<std::size_t>(j)];
    }
  });
  if (disconnected.load())
    throw ConstructionError(
        "sample too sparse for horizontal connectivity; increase n or the "
        "neighbor count");
  // Dijkstra is exact, but enforce symmetry against roundoff.
  dist = 0.5 * (dist + dist.transpose()).eval();
  for (int i = 0; i < n; ++i) dist(i, i) = 0.0;
  return dist;
}

}  // namespace

namespace {

double riem_mesh_norm(const Eigen::MatrixX3d& pts,
                      const std::vector<std::vector<int>>& nb) {
  double mesh = 0.0;
  for (int k = 0; k < pts.rows(); ++k) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j : nb[static_cast<std::size_t>(k)])
      nearest = std::min(nearest, detail::great_circle(pts, k, j));
    mesh = std::max(mesh, nearest);
  }
  return mesh;
}

}  // namespace

Eigen::MatrixXd cc_ball_box_distances(const Eigen::MatrixX3d& points,
                                      int knn) {
  if (points.rows() < 4)
    throw std::invalid_argument("need at least 4 points for a CC metric");
  for (int i = 0; i < points.rows(); ++i)
    if (std::abs(points.row(i).norm() - 1.0) > 1e-6)
      throw ValidationError("cc_ball_box points must lie on the unit sphere");
  const auto nb = knn_lists(points, knn);
  return cc_distances(points, nb, 2.2 * riem_mesh_norm(points, nb));
}

double SrSphereInstance::riem_distance(int i, int j) const {
  return detail::great_circle(points, i, j);
}

int SrSphereInstance::pole_index() const {
  int best = 0;
  for (int i = 1; i < points.rows(); ++i)
    if (std::abs(points(i, 2)) > std::abs(points(best, 2))) best = i;
  return best;
}

int SrSphereInstance::equator_index() const {
  int best = 0;
  for (int i = 1; i < points.rows(); ++i)
    if (std::abs(points(i, 2)) < std::abs(points(best, 2))) best = i;
  return best;
}

SrSphereInstance make_sr_sphere(int n, int l_max, std::uint64_t seed,
                                int knn) {
  if (n < 64) throw std::invalid_argument("sub-Riemannian sphere needs n >= 64");
  if (n > MetricMeasureSpace::kDenseCap)
    throw CapabilityError("sub-Riemannian sphere exceeds the dense cap");
  if (knn < 6) throw std::invalid_argument("need at least 6 neighbors");

  SrSphereInstance inst;
  inst.points = detail::fibonacci_sphere(n, seed);
  inst.oracle = sr_sphere_spectrum(l_max);

  const auto nb = knn_lists(inst.points, knn);
  inst.mesh_norm_riem = riem_mesh_norm(inst.points, nb);

  // Quadratic form B = D1^T M D1 + D2^T M D2 from the per-point difference
  // stencils; mu-symmetric and non-negative by construction.
  constexpr double kPi = 3.14159265358979323846;
  const double mu_point = 4.0 * kPi / n;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const auto& neighbors = nb[static_cast<std::size_t>(k)];
    const GradientStencil st = gradient_stencil(inst.points, k, neighbors);
    const int m = static_cast<int>(st.nodes.size());
    for (int a = 0; a < 2; ++a)
      for (int p = 0; p < m; ++p) {
        const double cp = st.rows(a, p);
        if (cp == 0.0) continue;
        for (int q = 0; q < m; ++q)
          B(st.nodes[static_cast<std::size_t>(p)],
            st.nodes[static_cast<std::size_t>(q)]) +=
              mu_point * cp * st.rows(a, q);
      }
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        B(st.nodes[static_cast<std::size_t>(p)],
          st.nodes[static_cast<std::size_t>(q)]) +=
            mu_point * st.penalty(p, q);
  }
  Eigen::MatrixXd cc =
      cc_distances(inst.points, nb, 2.2 * inst.mesh_norm_riem);
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, mu_point);
  inst.space = std::make_shared<const MetricMeasureSpace>(
      MetricMeasureSpace::from_matrix(std::move(cc), std::move(mu),
                                      "sr_sphere"));
  inst.op = DirichletOperator::from_form_matrix(inst.space, B);
  return inst;
}

}  // namespace wwl
