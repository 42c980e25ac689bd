#pragma once

#include <optional>
#include <span>

#include "fdpr/poly_basis.hpp"
#include "fdpr/quasi_interpolant.hpp"
#include "fdpr/simplex.hpp"
#include "fdpr/weights.hpp"

namespace fdpr {

/// Everything about the weighted 1-norm problem that does not depend on the
/// evaluation point: nodes, basis, weights, scale and A = (P^T, -P^T).
class LpContext {
 public:
  /// Throws InvalidArgument when the nodes are not unisolvent.
  LpContext(NodeSet nodes, BasisSpec basis, WeightSpec weights, double scale,
            std::optional<double> snap_tol = std::nullopt);

  const NodeSet& nodes() const noexcept { return nodes_; }
  const BasisSpec& basis() const noexcept { return basis_; }
  const WeightSpec& weights() const noexcept { return weights_; }
  double scale() const noexcept { return scale_; }
  double snap_tol() const noexcept { return snap_tol_; }
  const Eigen::MatrixXd& constraint_matrix() const noexcept { return a_; }
  Eigen::Index node_count() const noexcept { return nodes_.size(); }
  Eigen::Index basis_size() const noexcept { return a_.rows(); }

  std::optional<Eigen::Index> snapped_node(const Point& x) const;

 private:
  NodeSet nodes_;
  BasisSpec basis_;
  WeightSpec weights_;
  double scale_;
  double snap_tol_;
  Eigen::MatrixXd a_;
};

/// min sum_i (a+_i + a-_i) / w(x, x_i)  s.t.  P^T (a+ - a-) = p(x), a+, a- >= 0.
///
/// The simplex works on costs divided by their smallest entry; the true
/// objective is cost_scale * lp.c^T alpha.
struct LpProblem {
  Point x;
  Eigen::VectorXd objective_weights;  ///< 1 / w(x, x_i), capped at 1e300
  StandardLp lp;
  double cost_scale = 1.0;

  Eigen::Index node_count() const noexcept { return objective_weights.size(); }
};

LpProblem build_lp(const LpContext& context, const Point& x);
LpProblem build_lp(const NodeSet& nodes, const BasisSpec& basis, const WeightSpec& weights, double scale,
                   const Point& x);
/// Refreshes x, the costs and the right-hand side of an existing problem.
void update_lp(const LpContext& context, const Point& x, LpProblem& problem);

struct LpSolution {
  CoefficientVector coefficients;  ///< a+ - a-, sparse over the basic structural columns
  double objective = 0.0;          ///< in true (unscaled) weights
  std::vector<Eigen::Index> basis;
  Eigen::VectorXd duals;           ///< for the scaled costs
  int iterations = 0;
  int generation_rounds = 0;       ///< columns added by column generation
  LpStatus status = LpStatus::infeasible;
  double feasibility_residual = 0.0;  ///< |P^T a - p(x)|_inf
};

/// Cold two-phase solve.
LpSolution simplex_solve(const LpProblem& problem, const SimplexOptions& options = {});

/// Basis and inverse carried from the previous evaluation point.
struct LpState {
  std::vector<Eigen::Index> basis;
  Eigen::MatrixXd basis_inverse;
  std::optional<Point> previous;

  bool empty() const noexcept { return basis.empty(); }
  void clear() {
    basis.clear();
    basis_inverse.resize(0, 0);
    previous.reset();
  }
};

/// Resumes from `state` (primal if still feasible, dual if still dual
/// feasible, cold otherwise) and stores the new basis back into it.
LpSolution warm_start_solve(const LpProblem& problem, LpState& state, const SimplexOptions& options = {});

/// The 2Q columns (both signs) of the Q cheapest, i.e. nearest, nodes.
std::vector<Eigen::Index> default_initial_columns(const LpProblem& problem);

/// Solves over `initial_columns` and adds the most negative reduced cost
/// column until the duals price out every excluded column. An infeasible
/// start is augmented by a unisolvent Q-subset of the cheapest nodes.
LpSolution column_generation_solve(const LpProblem& problem, std::span<const Eigen::Index> initial_columns,
                                   const SimplexOptions& options = {});

enum class LpStrategy { cold, warm, column_generation };

LpStrategy parse_lp_strategy(std::string_view text);
std::string to_string(LpStrategy s);

/// Solves one point. Divergent weights snap to the cardinal vector at nodes.
LpSolution solve_point(const LpContext& context, const Point& x, LpStrategy strategy, LpState& state,
                       const SimplexOptions& options = {});

class LpEngine : public QuasiInterpolant {
 public:
  explicit LpEngine(LpContext context, LpStrategy strategy = LpStrategy::warm, SimplexOptions options = {});

  /// Throws SolverFailure unless the LP reaches optimality.
  CoefficientVector coefficients(const Point& x) override;
  std::unique_ptr<QuasiInterpolant> clone() const override;
  const NodeSet& nodes() const override { return context_.nodes(); }
  int degree() const override { return context_.basis().degree(); }
  std::string name() const override { return "lp"; }
  void reset() override { state_.clear(); }

  const LpContext& context() const noexcept { return context_; }
  LpStrategy strategy() const noexcept { return strategy_; }
  const LpSolution& last_solution() const noexcept { return last_; }
  long total_iterations() const noexcept { return total_iterations_; }

 private:
  LpContext context_;
  LpStrategy strategy_;
  SimplexOptions options_;
  LpState state_;
  LpSolution last_;
  long total_iterations_ = 0;
};

}  // namespace fdpr
