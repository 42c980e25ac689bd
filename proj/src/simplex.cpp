#include "fdpr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kSingularTol = 1e-13;

}  // namespace

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

SimplexSolver::SimplexSolver(const StandardLp& lp, SimplexOptions options)
    : lp_(lp), opt_(options), m_(lp.rows()), n_(lp.cols()) {
  if (lp_.b.size() != m_ || lp_.c.size() != n_) throw InvalidArgument("LP dimensions are inconsistent");
  if (m_ < 1) throw InvalidArgument("LP needs at least one constraint");
  if (opt_.bland_after <= 0) opt_.bland_after = static_cast<int>(5 * n_);
  if (opt_.max_iterations <= 0) opt_.max_iterations = static_cast<int>(50 * (m_ + n_));
  if (opt_.refactor_every <= 0) opt_.refactor_every = 50;
  art_sign_ = lp_.b.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
  active_.assign(static_cast<std::size_t>(n_), 1);
  in_basis_.assign(static_cast<std::size_t>(n_ + m_), 0);
}

void SimplexSolver::set_active(std::vector<char> mask) {
  if (static_cast<Eigen::Index>(mask.size()) != n_) throw InvalidArgument("active mask has wrong length");
  active_ = std::move(mask);
}

void SimplexSolver::activate(Eigen::Index j) { active_[static_cast<std::size_t>(j)] = 1; }

Eigen::VectorXd SimplexSolver::column(Eigen::Index j) const {
  if (j < n_) return lp_.a.col(j);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
  e[j - n_] = art_sign_[j - n_];
  return e;
}

double SimplexSolver::cost(Eigen::Index j) const {
  if (phase_ == Phase::one) return j >= n_ ? 1.0 : 0.0;
  return j < n_ ? lp_.c[j] : 0.0;
}

double SimplexSolver::dual_tol(Eigen::Index j) const { return opt_.optimality_tol * (1.0 + std::abs(cost(j))); }

double SimplexSolver::objective() const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m_; ++i) s += cost(basis_[static_cast<std::size_t>(i)]) * xb_[i];
  return s;
}

bool SimplexSolver::refactor() {
  Eigen::MatrixXd ab(m_, m_);
  for (Eigen::Index i = 0; i < m_; ++i) ab.col(i) = column(basis_[static_cast<std::size_t>(i)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ab);
  lu.setThreshold(kSingularTol);
  if (!lu.isInvertible()) return false;
  binv_ = lu.inverse();
  xb_ = binv_ * lp_.b;
  since_refactor_ = 0;
  return true;
}

Eigen::VectorXd SimplexSolver::duals() const {
  Eigen::VectorXd cb(m_);
  for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost(basis_[static_cast<std::size_t>(i)]);
  return binv_.transpose() * cb;
}

Eigen::VectorXd SimplexSolver::reduced_costs() const {
  const Eigen::VectorXd u = duals();
  Eigen::VectorXd d = lp_.a.transpose() * u;
  for (Eigen::Index j = 0; j < n_; ++j) d[j] = cost(j) - d[j];
  return d;
}

void SimplexSolver::pivot(Eigen::Index row, Eigen::Index entering, const Eigen::VectorXd& dir) {
  const double theta = xb_[row] / dir[row];
  xb_ -= theta * dir;
  xb_[row] = theta;
  in_basis_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(row)])] = 0;
  in_basis_[static_cast<std::size_t>(entering)] = 1;
  basis_[static_cast<std::size_t>(row)] = entering;

  binv_.row(row) /= dir[row];
  for (Eigen::Index i = 0; i < m_; ++i)
    if (i != row && dir[i] != 0.0) binv_.row(i) -= dir[i] * binv_.row(row);

  ++iterations_;
  if (phase_ == Phase::one) ++phase1_iterations_;
  if (++since_refactor_ >= opt_.refactor_every && !refactor())
    throw IllConditioned("simplex basis became singular on refactorisation", 0.0);
}

void SimplexSolver::trace(const char* phase, Eigen::Index entering, Eigen::Index leaving) const {
  if (!opt_.trace) return;
  *opt_.trace << phase << ' ' << iterations_ << ' ' << entering << ' ' << leaving << ' ' << objective() << '\n';
}

LpStatus SimplexSolver::primal(Phase phase) {
  phase_ = phase;
  int degenerate_run = 0;
  while (true) {
    if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
    const bool bland = degenerate_run > opt_.bland_after;
    const Eigen::VectorXd u = duals();
    const Eigen::VectorXd au = lp_.a.transpose() * u;

    Eigen::Index entering = -1;
    double best = 0.0;
    auto consider = [&](Eigen::Index j, double d) {
      if (d >= -dual_tol(j)) return false;
      if (entering < 0 || d < best) {
        entering = j;
        best = d;
      }
      return bland;  // Bland: first improving column wins
    };
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (!active_[static_cast<std::size_t>(j)] || in_basis_[static_cast<std::size_t>(j)]) continue;
      if (consider(j, cost(j) - au[j])) break;
    }
    if (entering < 0 && phase == Phase::one && artificials_on_) {
      for (Eigen::Index r = 0; r < m_ && entering < 0; ++r) {
        const Eigen::Index j = n_ + r;
        if (!in_basis_[static_cast<std::size_t>(j)]) consider(j, cost(j) - art_sign_[r] * u[r]);
      }
    }
    if (entering < 0) return LpStatus::optimal;

    const Eigen::VectorXd dir = binv_ * column(entering);
    const double scale = dir.cwiseAbs().maxCoeff();
    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (dir[i] <= kPivotTol * scale) continue;
      const double r = std::max(xb_[i], 0.0) / dir[i];
      const double slack = 1e-12 * (1.0 + ratio);
      if (leave < 0 || r < ratio - slack) {
        leave = i;
        ratio = r;
      } else if (r <= ratio + slack) {
        const bool take = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]
                                : dir[i] > dir[leave];
        if (take) {
          leave = i;
          ratio = std::min(ratio, r);
        }
      }
    }
    if (leave < 0) return LpStatus::unbounded;

    const Eigen::Index leaving = basis_[static_cast<std::size_t>(leave)];
    xb_[leave] = std::max(xb_[leave], 0.0);
    pivot(leave, entering, dir);
    degenerate_run = ratio <= opt_.feasibility_tol ? degenerate_run + 1 : 0;
    trace(phase == Phase::one ? "p1" : "p2", entering, leaving);
  }
}

LpStatus SimplexSolver::dual() {
  phase_ = Phase::two;
  while (true) {
    if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
    Eigen::Index leave = -1;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (xb_[i] < -opt_.feasibility_tol && (leave < 0 || xb_[i] < xb_[leave])) leave = i;
    if (leave < 0) return LpStatus::optimal;

    const Eigen::VectorXd d = reduced_costs();
    const Eigen::VectorXd alpha = lp_.a.transpose() * binv_.row(leave).transpose();
    const double scale = alpha.cwiseAbs().maxCoeff();
    Eigen::Index entering = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (!active_[static_cast<std::size_t>(j)] || in_basis_[static_cast<std::size_t>(j)]) continue;
      if (alpha[j] >= -kPivotTol * scale) continue;
      const double r = std::max(d[j], 0.0) / -alpha[j];
      if (r < ratio) {
        ratio = r;
        entering = j;
      }
    }
    if (entering < 0) return LpStatus::infeasible;

    const Eigen::VectorXd dir = binv_ * column(entering);
    const Eigen::Index leaving = basis_[static_cast<std::size_t>(leave)];
    pivot(leave, entering, dir);
    trace("d2", entering, leaving);
  }
}

void SimplexSolver::drive_out_artificials() {
  for (Eigen::Index r = 0; r < m_; ++r) {
    if (basis_[static_cast<std::size_t>(r)] < n_) continue;
    Eigen::Index best = -1;
    double best_abs = 0.0;
    const Eigen::RowVectorXd row = binv_.row(r);
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (!active_[static_cast<std::size_t>(j)] || in_basis_[static_cast<std::size_t>(j)]) continue;
      const double v = std::abs(row.dot(lp_.a.col(j)));
      if (v > best_abs) {
        best_abs = v;
        best = j;
      }
    }
    if (best < 0 || best_abs <= 1e-9) throw SolverFailure("constraint matrix is rank deficient on the active columns");
    const Eigen::VectorXd dir = binv_ * lp_.a.col(best);
    xb_[r] = 0.0;
    const Eigen::Index leaving = basis_[static_cast<std::size_t>(r)];
    pivot(r, best, dir);
    trace("p1", best, leaving);
  }
}

LpStatus SimplexSolver::phase_one() {
  std::fill(in_basis_.begin(), in_basis_.end(), 0);
  basis_.resize(static_cast<std::size_t>(m_));
  for (Eigen::Index r = 0; r < m_; ++r) {
    basis_[static_cast<std::size_t>(r)] = n_ + r;
    in_basis_[static_cast<std::size_t>(n_ + r)] = 1;
  }
  binv_ = art_sign_.asDiagonal();
  xb_ = lp_.b.cwiseAbs();
  since_refactor_ = 0;
  artificials_on_ = true;

  const LpStatus s = primal(Phase::one);
  if (s == LpStatus::iteration_limit) {
    artificials_on_ = false;
    return s;
  }
  const double infeasibility = objective();
  if (infeasibility > opt_.feasibility_tol * (1.0 + lp_.b.cwiseAbs().maxCoeff())) {
    artificials_on_ = false;
    return LpStatus::infeasible;
  }
  drive_out_artificials();
  artificials_on_ = false;
  phase_ = Phase::two;
  return LpStatus::optimal;
}

bool SimplexSolver::find_feasible_basis() {
  const LpStatus s = phase_one();
  if (s == LpStatus::iteration_limit) throw SolverFailure("phase 1 hit the iteration limit");
  return s == LpStatus::optimal;
}

LpStatus SimplexSolver::optimize() { return primal(Phase::two); }

SimplexResult SimplexSolver::result(LpStatus status) const {
  SimplexResult r;
  r.status = status;
  r.iterations = iterations_;
  r.phase1_iterations = phase1_iterations_;
  r.basis = basis_;
  r.x = Eigen::VectorXd::Zero(n_);
  for (Eigen::Index i = 0; i < m_; ++i) {
    const Eigen::Index j = basis_[static_cast<std::size_t>(i)];
    if (j < n_) r.x[j] = std::max(xb_[i], 0.0);
  }
  r.objective = lp_.c.dot(r.x);
  Eigen::VectorXd cb(m_);
  for (Eigen::Index i = 0; i < m_; ++i) {
    const Eigen::Index j = basis_[static_cast<std::size_t>(i)];
    cb[i] = j < n_ ? lp_.c[j] : 0.0;
  }
  r.duals = binv_.transpose() * cb;
  return r;
}

SimplexResult SimplexSolver::solve() {
  iterations_ = phase1_iterations_ = 0;
  const LpStatus s = phase_one();
  if (s != LpStatus::optimal) return result(s);
  return result(optimize());
}

SimplexResult SimplexSolver::solve_from(std::span<const Eigen::Index> basis, const Eigen::MatrixXd* basis_inverse) {
  iterations_ = phase1_iterations_ = 0;
  if (static_cast<Eigen::Index>(basis.size()) != m_) return solve();
  std::fill(in_basis_.begin(), in_basis_.end(), 0);
  basis_.assign(basis.begin(), basis.end());
  for (auto j : basis_) {
    if (j < 0 || j >= n_ || in_basis_[static_cast<std::size_t>(j)] || !active_[static_cast<std::size_t>(j)])
      return solve();
    in_basis_[static_cast<std::size_t>(j)] = 1;
  }
  phase_ = Phase::two;
  artificials_on_ = false;
  if (basis_inverse && basis_inverse->rows() == m_ && basis_inverse->cols() == m_) {
    binv_ = *basis_inverse;
    xb_ = binv_ * lp_.b;
    since_refactor_ = 0;
  } else if (!refactor()) {
    return solve();
  }

  if (xb_.minCoeff() >= -opt_.feasibility_tol) return result(optimize());

  const Eigen::VectorXd d = reduced_costs();
  bool dual_feasible = true;
  for (Eigen::Index j = 0; j < n_ && dual_feasible; ++j)
    if (active_[static_cast<std::size_t>(j)] && !in_basis_[static_cast<std::size_t>(j)] && d[j] < -dual_tol(j))
      dual_feasible = false;
  if (dual_feasible) {
    const LpStatus s = dual();
    if (s != LpStatus::optimal) return result(s);
    return result(optimize());
  }
  return solve();
}

}  // namespace fdpr
