#include "fdpr/lp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

constexpr double kCostCap = 1e300;

LpSolution finish(const LpProblem& problem, const SimplexResult& r) {
  const Eigen::Index n = problem.node_count();
  LpSolution s;
  s.status = r.status;
  s.iterations = r.iterations;
  s.basis = r.basis;
  s.duals = r.duals;
  s.objective = problem.cost_scale * r.objective;

  std::vector<Eigen::Index> support;
  std::vector<double> values;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  for (auto j : r.basis) {
    if (j >= 2 * n) continue;
    const Eigen::Index node = j < n ? j : j - n;
    a[node] += j < n ? r.x[j] : -r.x[j];
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (a[j] == 0.0) continue;
    support.push_back(j);
    values.push_back(a[j]);
  }
  s.coefficients = CoefficientVector::sparse(problem.x, n, std::move(support), std::move(values));
  const Eigen::MatrixXd& pt = problem.lp.a.leftCols(n);
  s.feasibility_residual = (pt * a - problem.lp.b).cwiseAbs().maxCoeff();
  return s;
}

// Greedy pick of nodes, cheapest first, whose P rows are linearly independent.
std::vector<Eigen::Index> unisolvent_subset(const LpProblem& problem) {
  const Eigen::Index n = problem.node_count();
  const Eigen::Index q = problem.lp.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return problem.objective_weights[a] < problem.objective_weights[b]; });

  std::vector<Eigen::Index> picked;
  Eigen::MatrixXd onb(q, q);
  for (auto j : order) {
    Eigen::VectorXd v = problem.lp.a.col(j);
    const double norm = v.norm();
    const auto k = static_cast<Eigen::Index>(picked.size());
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < k; ++i) v -= onb.col(i).dot(v) * onb.col(i);
    if (v.norm() <= 1e-10 * norm) continue;
    onb.col(k) = v.normalized();
    picked.push_back(j);
    if (static_cast<Eigen::Index>(picked.size()) == q) break;
  }
  return picked;
}

}  // namespace

LpContext::LpContext(NodeSet nodes, BasisSpec basis, WeightSpec weights, double scale,
                     std::optional<double> snap_tol)
    : nodes_(std::move(nodes)), basis_(std::move(basis)), weights_(weights), scale_(scale) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InvalidArgument("weight scale must be positive");
  if (basis_.dim() != nodes_.dim()) throw InvalidArgument("basis and node dimensions differ");
  snap_tol_ = snap_tol.value_or(1e-12 * scale_);
  Vandermonde v(basis_, nodes_.points());
  const auto report = unisolvency_check(v);
  if (!report.unisolvent)
    throw InvalidArgument("nodes are not unisolvent for degree " + std::to_string(basis_.degree()) + " (rank " +
                          std::to_string(report.rank) + " < " + std::to_string(basis_.size()) + ")");
  const Eigen::Index n = nodes_.size();
  a_.resize(v.cols(), 2 * n);
  a_.leftCols(n) = v.matrix().transpose();
  a_.rightCols(n) = -v.matrix().transpose();
}

std::optional<Eigen::Index> LpContext::snapped_node(const Point& x) const {
  if (!weights_.divergent_at_zero()) return std::nullopt;
  std::optional<Eigen::Index> best;
  double best_r = snap_tol_;
  for (Eigen::Index j = 0; j < nodes_.size(); ++j) {
    const double r = (nodes_.points().row(j).transpose() - x).norm();
    if (r < best_r || (r == 0.0 && !best)) {
      best_r = r;
      best = j;
    }
  }
  return best;
}

void update_lp(const LpContext& context, const Point& x, LpProblem& problem) {
  const Eigen::Index n = context.node_count();
  if (problem.lp.a.cols() != 2 * n) problem.lp.a = context.constraint_matrix();
  problem.x = x;
  problem.objective_weights.resize(n);
  Eigen::VectorXd neg_log(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = (context.nodes().points().row(j).transpose() - x).norm() / context.scale();
    neg_log[j] = t == 0.0 && context.weights().divergent_at_zero() ? -std::log(kCostCap)
                                                                    : -log_phi(context.weights(), t);
  }
  const double lo = neg_log.minCoeff();
  const double log_cap = std::log(kCostCap);
  problem.lp.c.resize(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    problem.objective_weights[j] = std::exp(std::clamp(neg_log[j], -log_cap, log_cap));
    problem.lp.c[j] = problem.lp.c[n + j] = std::exp(std::min(neg_log[j] - lo, log_cap));
  }
  problem.cost_scale = std::exp(std::clamp(lo, -log_cap, log_cap));
  problem.lp.b = context.basis().eval(x);
}

LpProblem build_lp(const LpContext& context, const Point& x) {
  LpProblem p;
  update_lp(context, x, p);
  return p;
}

LpProblem build_lp(const NodeSet& nodes, const BasisSpec& basis, const WeightSpec& weights, double scale,
                   const Point& x) {
  return build_lp(LpContext(nodes, basis, weights, scale), x);
}

LpSolution simplex_solve(const LpProblem& problem, const SimplexOptions& options) {
  SimplexSolver solver(problem.lp, options);
  return finish(problem, solver.solve());
}

LpSolution warm_start_solve(const LpProblem& problem, LpState& state, const SimplexOptions& options) {
  SimplexSolver solver(problem.lp, options);
  const SimplexResult r = state.empty() ? solver.solve()
                                        : solver.solve_from(state.basis, state.basis_inverse.size() > 0
                                                                             ? &state.basis_inverse
                                                                             : nullptr);
  if (r.status == LpStatus::optimal) {
    state.basis = r.basis;
    state.basis_inverse = solver.basis_inverse();
    state.previous = problem.x;
  } else {
    state.clear();
  }
  return finish(problem, r);
}

std::vector<Eigen::Index> default_initial_columns(const LpProblem& problem) {
  const Eigen::Index n = problem.node_count();
  const Eigen::Index q = std::min(problem.lp.rows(), n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::partial_sort(order.begin(), order.begin() + q, order.end(), [&](auto a, auto b) {
    const double ca = problem.objective_weights[a], cb = problem.objective_weights[b];
    return ca < cb || (ca == cb && a < b);
  });
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < q; ++k) {
    cols.push_back(order[static_cast<std::size_t>(k)]);
    cols.push_back(order[static_cast<std::size_t>(k)] + n);
  }
  std::sort(cols.begin(), cols.end());
  return cols;
}

LpSolution column_generation_solve(const LpProblem& problem, std::span<const Eigen::Index> initial_columns,
                                   const SimplexOptions& options) {
  const Eigen::Index n = problem.node_count();
  const Eigen::Index cols = 2 * n;
  std::vector<char> mask(static_cast<std::size_t>(cols), 0);
  for (auto j : initial_columns) {
    if (j < 0 || j >= cols) throw InvalidArgument("column generation: initial column out of range");
    mask[static_cast<std::size_t>(j)] = 1;
  }

  SimplexSolver solver(problem.lp, options);
  auto start = [&](const std::vector<char>& m) {
    solver.set_active(m);
    try {
      return solver.find_feasible_basis();
    } catch (const SolverFailure&) {
      return false;  // feasible but rank deficient restriction
    }
  };

  if (!start(mask)) {
    for (auto j : unisolvent_subset(problem)) mask[static_cast<std::size_t>(j)] = mask[static_cast<std::size_t>(j + n)] = 1;
    if (!start(mask)) {
      std::fill(mask.begin(), mask.end(), 1);
      if (!start(mask)) return finish(problem, solver.result(LpStatus::infeasible));
    }
  }

  int rounds = 0;
  while (true) {
    const LpStatus s = solver.optimize();
    if (s != LpStatus::optimal) {
      LpSolution out = finish(problem, solver.result(s));
      out.generation_rounds = rounds;
      return out;
    }
    const Eigen::VectorXd d = solver.reduced_costs();
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (solver.is_active(j)) continue;
      if (d[j] >= -options.optimality_tol * (1.0 + std::abs(problem.lp.c[j]))) continue;
      if (entering < 0 || d[j] < d[entering]) entering = j;
    }
    if (entering < 0) {
      LpSolution out = finish(problem, solver.result(LpStatus::optimal));
      out.generation_rounds = rounds;
      return out;
    }
    solver.activate(entering);
    ++rounds;
  }
}

LpStrategy parse_lp_strategy(std::string_view text) {
  if (text == "cold") return LpStrategy::cold;
  if (text == "warm") return LpStrategy::warm;
  if (text == "column-generation" || text == "colgen") return LpStrategy::column_generation;
  throw InvalidArgument("unknown LP strategy '" + std::string(text) + "'");
}

std::string to_string(LpStrategy s) {
  switch (s) {
    case LpStrategy::cold: return "cold";
    case LpStrategy::warm: return "warm";
    case LpStrategy::column_generation: return "column-generation";
  }
  return "?";
}

LpSolution solve_point(const LpContext& context, const Point& x, LpStrategy strategy, LpState& state,
                       const SimplexOptions& options) {
  if (auto j = context.snapped_node(x)) {
    LpSolution s;
    s.coefficients = CoefficientVector::cardinal(x, context.node_count(), *j);
    s.status = LpStatus::optimal;
    return s;
  }
  const LpProblem problem = build_lp(context, x);
  switch (strategy) {
    case LpStrategy::cold: return simplex_solve(problem, options);
    case LpStrategy::warm: return warm_start_solve(problem, state, options);
    case LpStrategy::column_generation:
      return column_generation_solve(problem, default_initial_columns(problem), options);
  }
  return {};
}

LpEngine::LpEngine(LpContext context, LpStrategy strategy, SimplexOptions options)
    : context_(std::move(context)), strategy_(strategy), options_(options) {}

CoefficientVector LpEngine::coefficients(const Point& x) {
  last_ = solve_point(context_, x, strategy_, state_, options_);
  total_iterations_ += last_.iterations;
  if (last_.status != LpStatus::optimal)
    throw SolverFailure("LP at evaluation point ended " + to_string(last_.status));
  return last_.coefficients;
}

std::unique_ptr<QuasiInterpolant> LpEngine::clone() const {
  auto copy = std::make_unique<LpEngine>(*this);
  copy->reset();
  return copy;
}

}  // namespace fdpr
