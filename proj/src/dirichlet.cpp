#include "wwl/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "wwl/common.hpp"

namespace wwl {

DirichletOperator DirichletOperator::from_edges(
    std::shared_ptr<const MetricMeasureSpace> space,
    const std::vector<Edge>& edges, bool require_nonnegative) {
  if (!space) throw std::invalid_argument("operator needs a space");
  const int n = space->point_count();
  std::map<std::pair<int, int>, double> acc;
  for (const Edge& e : edges) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
      throw std::out_of_range("edge endpoint out of range");
    if (e.i == e.j) throw std::invalid_argument("self-loop edge rejected");
    if (require_nonnegative && !(e.w >= 0.0))
      throw std::invalid_argument("negative conductance rejected");
    const auto key = std::minmax(e.i, e.j);
    acc[{key.first, key.second}] += e.w;
  }
  DirichletOperator op;
  op.space_ = std::move(space);
  op.edges_.reserve(acc.size());
  op.nonneg_ = true;
  for (const auto& [key, w] : acc) {
    if (w == 0.0) continue;
    if (w < 0.0) op.nonneg_ = false;
    op.edges_.push_back({key.first, key.second, w});
  }
  op.build_csr();
  return op;
}

DirichletOperator DirichletOperator::from_form_matrix(
    std::shared_ptr<const MetricMeasureSpace> space, const Eigen::MatrixXd& B,
    double prune_rel) {
  if (!space) throw std::invalid_argument("operator needs a space");
  const int n = space->point_count();
  if (B.rows() != n || B.cols() != n)
    throw std::invalid_argument("form matrix size mismatch");
  const double scale = B.cwiseAbs().maxCoeff();
  const double cut = prune_rel * (scale > 0.0 ? scale : 1.0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double w = -0.5 * (B(i, j) + B(j, i));
      if (std::abs(w) > cut) edges.push_back({j, i, w});
    }
  return from_edges(std::move(space), edges, /*require_nonnegative=*/false);
}

void DirichletOperator::build_csr() {
  const int n = space_->point_count();
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges_) {
    ++counts[static_cast<std::size_t>(e.i)];
    ++counts[static_cast<std::size_t>(e.j)];
  }
  row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    row_ptr_[static_cast<std::size_t>(i) + 1] =
        row_ptr_[static_cast<std::size_t>(i)] +
        counts[static_cast<std::size_t>(i)];
  col_.resize(static_cast<std::size_t>(row_ptr_.back()));
  w_.resize(col_.size());
  std::vector<int> cursor(row_ptr_.begin(), row_ptr_.end() - 1);
  for (const Edge& e : edges_) {
    col_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.i)])] = e.j;
    w_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.i)]++)] = e.w;
    col_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.j)])] = e.i;
    w_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.j)]++)] = e.w;
  }
  degree_ = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr_[static_cast<std::size_t>(i)];
         k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
      degree_[i] += w_[static_cast<std::size_t>(k)];
}

void DirichletOperator::check_fn(const Eigen::VectorXd& f) const {
  if (f.size() != space_->point_count())
    throw std::invalid_argument("function length does not match point count");
}

Eigen::VectorXd DirichletOperator::apply(const Eigen::VectorXd& f) const {
  check_fn(f);
  const int n = space_->point_count();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double acc = degree_[i] * f[i];
    for (int k = row_ptr_[static_cast<std::size_t>(i)];
         k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
      acc -= w_[static_cast<std::size_t>(k)] *
             f[col_[static_cast<std::size_t>(k)]];
    out[i] = acc / space_->mu(i);
  }
  return out;
}

Eigen::VectorXd DirichletOperator::gamma(const Eigen::VectorXd& f,
                                         const Eigen::VectorXd& g) const {
  check_fn(f);
  check_fn(g);
  // Carre du champ for a non-negative L (generator sign convention):
  // Gamma(f,g) = (f Lg + g Lf - L(fg)) / 2, the squared-gradient form.
  const Eigen::VectorXd fg = f.cwiseProduct(g);
  return 0.5 * (f.cwiseProduct(apply(g)) + g.cwiseProduct(apply(f)) -
                apply(fg));
}

Eigen::VectorXd DirichletOperator::gamma_edge(const Eigen::VectorXd& f,
                                              const Eigen::VectorXd& g) const {
  check_fn(f);
  check_fn(g);
  const int n = space_->point_count();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = row_ptr_[static_cast<std::size_t>(i)];
         k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const int j = col_[static_cast<std::size_t>(k)];
      acc += w_[static_cast<std::size_t>(k)] * (f[i] - f[j]) * (g[i] - g[j]);
    }
    out[i] = acc / (2.0 * space_->mu(i));
  }
  return out;
}

double DirichletOperator::energy_edge(const Eigen::VectorXd& f) const {
  check_fn(f);
  double acc = 0.0;
  for (const Edge& e : edges_) {
    const double d = f[e.i] - f[e.j];
    acc += e.w * d * d;
  }
  return acc;
}

double DirichletOperator::mu_inner(const Eigen::VectorXd& f,
                                   const Eigen::VectorXd& g) const {
  check_fn(f);
  check_fn(g);
  return f.cwiseProduct(g).dot(space_->measure());
}

double DirichletOperator::mu_norm(const Eigen::VectorXd& f) const {
  return std::sqrt(std::max(0.0, mu_inner(f, f)));
}

Eigen::MatrixXd DirichletOperator::form_matrix() const {
  const int n = space_->point_count();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges_) {
    B(e.i, e.j) -= e.w;
    B(e.j, e.i) -= e.w;
    B(e.i, e.i) += e.w;
    B(e.j, e.j) += e.w;
  }
  return B;
}

GradientBoundReport check_gradient_bound(const DirichletOperator& op,
                                         int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int n = op.space().point_count();
  GradientBoundReport rep;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = gauss(rng);
    f.array() -= f.mean();
    const double denom = op.mu_inner(op.apply(f), f);  // ||L^{1/2} f||^2
    if (!(denom > 1e-14 * op.mu_inner(f, f))) {
      ++rep.skipped;
      continue;
    }
    const double num = op.gamma_edge(f, f).dot(op.space().measure());
    rep.c_measured = std::max(rep.c_measured, num / denom);
  }
  return rep;
}

PoincareResult poincare_constant(const DirichletOperator& op, const Ball& b) {
  PoincareResult out;
  out.ball_size = static_cast<int>(b.members.size());
  if (b.members.size() < 2 || !(b.radius > 0.0)) {
    out.disconnected = true;
    out.constant = std::numeric_limits<double>::infinity();
    return out;
  }
  const int m = static_cast<int>(b.members.size());
  std::vector<int> local(static_cast<std::size_t>(op.space().point_count()),
                         -1);
  for (int a = 0; a < m; ++a)
    local[static_cast<std::size_t>(b.members[static_cast<std::size_t>(a)])] = a;

  // mu-symmetrized restricted form: S_ab = B_ab / sqrt(mu_a mu_b) over the
  // ball subgraph only.
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m);
  std::vector<int> root(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) root[static_cast<std::size_t>(a)] = a;
  std::function<int(int)> find = [&](int a) {
    while (root[static_cast<std::size_t>(a)] != a) {
      root[static_cast<std::size_t>(a)] =
          root[static_cast<std::size_t>(root[static_cast<std::size_t>(a)])];
      a = root[static_cast<std::size_t>(a)];
    }
    return a;
  };
  bool any_edge = false;
  for (const auto& e : op.edges()) {
    const int ai = local[static_cast<std::size_t>(e.i)];
    const int aj = local[static_cast<std::size_t>(e.j)];
    if (ai < 0 || aj < 0 || e.w == 0.0) continue;
    any_edge = true;
    const double mi = op.space().mu(e.i), mj = op.space().mu(e.j);
    S(ai, aj) -= e.w / std::sqrt(mi * mj);
    S(aj, ai) -= e.w / std::sqrt(mi * mj);
    S(ai, ai) += e.w / mi;
    S(aj, aj) += e.w / mj;
    root[static_cast<std::size_t>(find(ai))] = find(aj);
  }
  int components = 0;
  for (int a = 0; a < m; ++a)
    if (find(a) == a) ++components;
  if (!any_edge || components > 1) {
    out.disconnected = true;
    out.constant = std::numeric_limits<double>::infinity();
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      S, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double scale = std::max(1.0, std::abs(ev[m - 1]));
  out.lambda1 = ev[1];
  if (!(out.lambda1 > 1e-12 * scale)) {
    out.disconnected = true;
    out.constant = std::numeric_limits<double>::infinity();
    return out;
  }
  out.constant = 1.0 / (b.radius * b.radius * out.lambda1);
  return out;
}

PoincareProfile poincare_profile(const DirichletOperator& op, double rho,
                                 int threads) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const int n = op.space().point_count();
  PoincareProfile prof;
  prof.rho = rho;
  prof.per_ball.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<char> bad(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t x) {
    const PoincareResult r =
        poincare_constant(op, ball(op.space(), static_cast<int>(x), rho));
    prof.per_ball[x] = r.constant;
    bad[x] = r.disconnected ? 1 : 0;
  });
  for (int x = 0; x < n; ++x) {
    if (bad[static_cast<std::size_t>(x)]) {
      ++prof.disconnected_count;
      continue;
    }
    prof.sup_constant =
        std::max(prof.sup_constant, prof.per_ball[static_cast<std::size_t>(x)]);
  }
  return prof;
}

}  // namespace wwl
