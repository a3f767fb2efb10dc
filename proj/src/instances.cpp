#include "wwl/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sphere_detail.hpp"
#include "wwl/common.hpp"
#include "wwl/io.hpp"

namespace wwl {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Disjoint-set connectivity over an edge list.
bool connected(int n, const std::vector<DirichletOperator::Edge>& edges) {
  std::vector<int> root(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) root[static_cast<std::size_t>(i)] = i;
  std::function<int(int)> find = [&](int a) {
    while (root[static_cast<std::size_t>(a)] != a) {
      root[static_cast<std::size_t>(a)] =
          root[static_cast<std::size_t>(root[static_cast<std::size_t>(a)])];
      a = root[static_cast<std::size_t>(a)];
    }
    return a;
  };
  int components = n;
  for (const auto& e : edges) {
    const int a = find(e.i), b = find(e.j);
    if (a != b) {
      root[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

Instance make_circle(int n, double circumference) {
  if (n < 8) throw std::invalid_argument("circle instance needs n >= 8");
  if (!(circumference > 0.0))
    throw std::invalid_argument("circumference must be positive");
  const double h = circumference / n;
  auto dist = [n, h](int i, int j) {
    const int k = std::abs(i - j);
    return h * std::min(k, n - k);
  };
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, h);
  auto space = std::make_shared<const MetricMeasureSpace>(
      MetricMeasureSpace::from_oracle(n, dist, std::move(mu), "circle"));
  std::vector<DirichletOperator::Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    edges.push_back({i, (i + 1) % n, 1.0 / h});
  DirichletOperator op = DirichletOperator::from_edges(space, edges);
  return {space, std::move(op)};
}

Instance make_interval(int n, double length) {
  if (n < 2) throw std::invalid_argument("interval instance needs n >= 2");
  if (!(length > 0.0)) throw std::invalid_argument("length must be positive");
  const double h = length / n;
  auto dist = [h](int i, int j) { return h * std::abs(i - j); };
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, h);
  auto space = std::make_shared<const MetricMeasureSpace>(
      MetricMeasureSpace::from_oracle(n, dist, std::move(mu), "interval"));
  std::vector<DirichletOperator::Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0 / h});
  DirichletOperator op = DirichletOperator::from_edges(space, edges);
  return {space, std::move(op)};
}

Instance make_torus2(int nx, int ny, double cx, double cy) {
  if (nx < 4 || ny < 4)
    throw std::invalid_argument("torus instance needs nx, ny >= 4");
  const long total = static_cast<long>(nx) * ny;
  if (total > MetricMeasureSpace::kDenseCap)
    throw CapabilityError("torus grid " + std::to_string(total) +
                          " exceeds the dense cap of " +
                          std::to_string(MetricMeasureSpace::kDenseCap));
  const double hx = cx / nx, hy = cy / ny;
  auto dist = [nx, ny, hx, hy](int a, int b) {
    const int axi = a / ny, ayi = a % ny;
    const int bxi = b / ny, byi = b % ny;
    const int dxi = std::abs(axi - bxi), dyi = std::abs(ayi - byi);
    const double dx = hx * std::min(dxi, nx - dxi);
    const double dy = hy * std::min(dyi, ny - dyi);
    return std::hypot(dx, dy);
  };
  Eigen::VectorXd mu =
      Eigen::VectorXd::Constant(static_cast<int>(total), hx * hy);
  auto space = std::make_shared<const MetricMeasureSpace>(
      MetricMeasureSpace::from_oracle(static_cast<int>(total), dist,
                                      std::move(mu), "torus2"));
  std::vector<DirichletOperator::Edge> edges;
  edges.reserve(static_cast<std::size_t>(2 * total));
  auto id = [ny](int ix, int iy) { return ix * ny + iy; };
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      edges.push_back({id(ix, iy), id((ix + 1) % nx, iy), hy / hx});
      edges.push_back({id(ix, iy), id(ix, (iy + 1) % ny), hx / hy});
    }
  DirichletOperator op = DirichletOperator::from_edges(space, edges);
  return {space, std::move(op)};
}

Instance make_sphere_mesh(int n, std::uint64_t seed, double bandwidth_scale) {
  if (n < 32) throw std::invalid_argument("sphere mesh needs n >= 32");
  if (n > MetricMeasureSpace::kDenseCap)
    throw CapabilityError("sphere mesh exceeds the dense cap");
  if (!(bandwidth_scale > 0.0))
    throw std::invalid_argument("bandwidth scale must be positive");
  const Eigen::MatrixX3d pts = detail::fibonacci_sphere(n, seed);

  auto dist = [pts](int i, int j) { return detail::great_circle(pts, i, j); };
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 4.0 * kPi / n);
  auto space = std::make_shared<const MetricMeasureSpace>(
      MetricMeasureSpace::from_oracle(n, dist, std::move(mu), "sphere_mesh"));

  // Kernel bandwidth eps = c n^{-1/4}; weights 4 pi / (n^2 eps^2)
  // exp(-d^2 / 4 eps) make the operator pointwise consistent with the
  // Laplace-Beltrami operator as n grows.
  const double eps = bandwidth_scale * std::pow(static_cast<double>(n), -0.25);
  const double d_cut2 = 4.0 * eps * std::log(1e4);
  const double norm = 4.0 * kPi / (static_cast<double>(n) * n * eps * eps);
  std::vector<DirichletOperator::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double d = space->distance(i, j);
      if (d * d > d_cut2) continue;
      edges.push_back({j, i, norm * std::exp(-d * d / (4.0 * eps))});
    }
  if (!connected(n, edges))
    throw ConstructionError(
        "sphere neighborhood graph is disconnected; enlarge the kernel "
        "bandwidth or the sample");
  DirichletOperator op = DirichletOperator::from_edges(space, edges);
  return {space, std::move(op)};
}

std::vector<double> circle_spectrum(double circumference, double omega_max) {
  std::vector<double> eigs{0.0};
  for (int k = 1;; ++k) {
    const double lam = std::pow(2.0 * kPi * k / circumference, 2);
    if (lam > omega_max) break;
    eigs.push_back(lam);
    eigs.push_back(lam);
  }
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

std::vector<double> interval_spectrum(double length, double omega_max) {
  std::vector<double> eigs{0.0};
  for (int k = 1;; ++k) {
    const double lam = std::pow(kPi * k / length, 2);
    if (lam > omega_max) break;
    eigs.push_back(lam);
  }
  return eigs;
}

std::vector<double> torus2_spectrum(double cx, double cy, double omega_max) {
  std::vector<double> eigs;
  const int kmax =
      static_cast<int>(std::floor(std::sqrt(omega_max) * cx / (2.0 * kPi))) + 1;
  const int lmax =
      static_cast<int>(std::floor(std::sqrt(omega_max) * cy / (2.0 * kPi))) + 1;
  for (int k = -kmax; k <= kmax; ++k)
    for (int l = -lmax; l <= lmax; ++l) {
      const double lam = std::pow(2.0 * kPi * k / cx, 2) +
                         std::pow(2.0 * kPi * l / cy, 2);
      if (lam <= omega_max) eigs.push_back(lam);
    }
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

std::vector<double> sr_sphere_spectrum(int l_max) {
  if (l_max < 0 || l_max > 40)
    throw std::invalid_argument("sub-Riemannian sphere oracle needs l_max in [0, 40]");
  std::vector<double> eigs;
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m)
      eigs.push_back(static_cast<double>(l) * (l + 1) -
                     static_cast<double>(m) * m);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

Instance make_instance(const InstanceSpec& spec) {
  if (spec.kind == "circle") return make_circle(spec.n, spec.circumference);
  if (spec.kind == "interval") return make_interval(spec.n, spec.length);
  if (spec.kind == "torus2")
    return make_torus2(spec.nx, spec.ny, spec.cx, spec.cy);
  if (spec.kind == "sphere_mesh") return make_sphere_mesh(spec.n, spec.seed);
  if (spec.kind == "sr_sphere") {
    SrSphereInstance sr = make_sr_sphere(spec.n, spec.l_max, spec.seed, spec.knn);
    return {sr.space, std::move(sr.op)};
  }
  if (spec.kind == "file") {
    if (spec.operator_file.empty())
      throw ValidationError("file instance needs operator_file");
    DirichletOperator op = load_operator(spec.operator_file);
    return {op.space_ptr(), std::move(op)};
  }
  throw std::invalid_argument("unknown instance kind: " + spec.kind);
}

}  // namespace wwl
