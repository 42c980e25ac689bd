#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fdpr {

/// min c^T x  subject to  A x = b, x >= 0.
struct StandardLp {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;

  Eigen::Index rows() const noexcept { return a.rows(); }
  Eigen::Index cols() const noexcept { return a.cols(); }
};

struct SimplexOptions {
  double optimality_tol = 1e-10;  ///< reduced costs >= -tol * (1 + |c_j|)
  double feasibility_tol = 1e-10;
  int refactor_every = 50;
  int bland_after = 0;       ///< consecutive degenerate pivots before Bland's rule; 0 means 5 * cols
  int max_iterations = 0;    ///< 0 means 50 * (rows + cols)
  std::ostream* trace = nullptr;  ///< one line per pivot: phase iteration entering leaving objective
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(LpStatus s);

struct SimplexResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;                  ///< primal point over the structural columns
  Eigen::VectorXd duals;              ///< u with A_B^T u = c_B
  std::vector<Eigen::Index> basis;    ///< one column index per row
  double objective = 0.0;
  int iterations = 0;                 ///< pivots, all phases
  int phase1_iterations = 0;
};

/// Dense revised simplex. The basis inverse is kept explicitly, updated by
/// elementary row operations after each pivot and rebuilt from an LU
/// factorisation every `refactor_every` pivots. Pricing is Dantzig's rule
/// with lowest-index tie-breaking, switching to Bland's rule after a run of
/// degenerate pivots.
///
/// Columns can be deactivated, which is how column generation restricts the
/// master problem; activate() brings one back while keeping the basis.
class SimplexSolver {
 public:
  SimplexSolver(const StandardLp& lp, SimplexOptions options = {});

  /// Two-phase solve from the artificial basis.
  SimplexResult solve();

  /// Restart from `basis` (and optionally its known inverse). Resumes primal
  /// simplex when the basis is primal feasible, dual simplex when it is dual
  /// feasible, and otherwise falls back to solve().
  SimplexResult solve_from(std::span<const Eigen::Index> basis, const Eigen::MatrixXd* basis_inverse = nullptr);

  // Lower-level pieces used by column generation.
  void set_active(std::vector<char> mask);
  void activate(Eigen::Index j);
  bool is_active(Eigen::Index j) const { return active_[static_cast<std::size_t>(j)] != 0; }
  /// Phase 1 over the active columns. False when the restricted problem is
  /// infeasible; throws SolverFailure when it runs out of iterations.
  bool find_feasible_basis();
  /// Primal phase 2 from the current (feasible) basis over active columns.
  LpStatus optimize();
  /// c_j - u^T A_j for the current basis.
  Eigen::VectorXd reduced_costs() const;
  Eigen::VectorXd duals() const;
  SimplexResult result(LpStatus status) const;
  const Eigen::MatrixXd& basis_inverse() const noexcept { return binv_; }

 private:
  enum class Phase { one, two };

  Eigen::VectorXd column(Eigen::Index j) const;
  double cost(Eigen::Index j) const;
  double objective() const;
  bool refactor();
  void pivot(Eigen::Index row, Eigen::Index entering, const Eigen::VectorXd& dir);
  LpStatus primal(Phase phase);
  LpStatus dual();
  LpStatus phase_one();
  void drive_out_artificials();
  void trace(const char* phase, Eigen::Index entering, Eigen::Index leaving) const;
  double dual_tol(Eigen::Index j) const;

  const StandardLp& lp_;
  SimplexOptions opt_;
  Eigen::Index m_, n_;
  Eigen::VectorXd art_sign_;
  std::vector<char> active_;      ///< structural columns only
  bool artificials_on_ = false;
  Phase phase_ = Phase::two;
  std::vector<Eigen::Index> basis_;
  std::vector<char> in_basis_;    ///< over n + m columns
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  int iterations_ = 0;
  int phase1_iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace fdpr
