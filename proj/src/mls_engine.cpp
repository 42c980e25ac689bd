#include "fdpr/mls_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

constexpr double kPivotSpread = 1e-8;
constexpr double kReproductionTol = 1e-9;

// Minimum-norm b with (W^1/2 P)^T b = rhs, returned as a = W^1/2 b. Rows are
// sorted by decreasing weight before Householder QR, which keeps the
// factorisation accurate when weights span many orders of magnitude.
Eigen::VectorXd solve_by_weighted_qr(const Eigen::MatrixXd& p, const Eigen::VectorXd& w, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = p.rows(), q = p.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w[a] > w[b]; });

  Eigen::MatrixXd m(n, q);
  Eigen::VectorXd root(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    root[r] = std::sqrt(w[order[static_cast<std::size_t>(r)]]);
    m.row(r) = root[r] * p.row(order[static_cast<std::size_t>(r)]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  const auto& packed = qr.matrixQR();
  const double bottom = std::abs(packed(q - 1, q - 1));
  if (!(bottom > 0.0)) throw IllConditioned("moving least squares system is rank deficient", bottom);

  const Eigen::VectorXd permuted = qr.colsPermutation().transpose() * rhs;
  Eigen::VectorXd y = packed.topLeftCorner(q, q).triangularView<Eigen::Upper>().transpose().solve(permuted);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b.head(q) = y;
  b = qr.householderQ() * b;

  Eigen::VectorXd a(n);
  for (Eigen::Index r = 0; r < n; ++r) a[order[static_cast<std::size_t>(r)]] = root[r] * b[r];
  const double residual = (p.transpose() * a - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= kReproductionTol * (1.0 + rhs.cwiseAbs().maxCoeff())))
    throw IllConditioned("moving least squares system is numerically rank deficient", bottom);
  return a;
}

}  // namespace

MlsProblem::MlsProblem(NodeSet nodes, BasisSpec basis, WeightSpec weights, double scale,
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
  p_ = v.matrix();
}

std::optional<Eigen::Index> MlsProblem::snapped_node(const Point& x) const {
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

Eigen::VectorXd MlsProblem::normalized_weights(const Point& x) const {
  const Eigen::Index n = nodes_.size();
  Eigen::VectorXd logw(n);
  for (Eigen::Index j = 0; j < n; ++j)
    logw[j] = log_phi(weights_, (nodes_.points().row(j).transpose() - x).norm() / scale_);
  const double top = logw.maxCoeff();
  return (logw.array() - top).exp().max(kWeightFloor).matrix();
}

GramSystem gram_system(const MlsProblem& problem, const Point& x) {
  const auto& p = problem.vandermonde();
  const auto& nodes = problem.nodes().points();
  Eigen::VectorXd w(p.rows());
  for (Eigen::Index j = 0; j < p.rows(); ++j)
    w[j] = eval_weight(problem.weights(), x, nodes.row(j).transpose(), problem.scale());
  return {p.transpose() * w.asDiagonal() * p, problem.basis().eval(x)};
}

CoefficientVector coefficients(const MlsProblem& problem, const Point& x) {
  const Eigen::Index n = problem.nodes().size();
  if (auto j = problem.snapped_node(x)) return CoefficientVector::cardinal(x, n, *j);

  const auto& p = problem.vandermonde();
  const Eigen::VectorXd w = problem.normalized_weights(x);
  const Eigen::VectorXd rhs = problem.basis().eval(x);
  const Eigen::MatrixXd g = p.transpose() * w.asDiagonal() * p;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  const auto d = ldlt.vectorD();
  const bool positive = ldlt.info() == Eigen::Success && (d.array() > 0.0).all();
  if (positive && d.minCoeff() >= kPivotSpread * d.maxCoeff()) {
    Eigen::VectorXd lambda = ldlt.solve(rhs);
    Eigen::VectorXd a = w.cwiseProduct(p * lambda);
    // One refinement sweep on the reproduction constraints.
    lambda = ldlt.solve(rhs - p.transpose() * a);
    a += w.cwiseProduct(p * lambda);
    return CoefficientVector::dense(x, std::move(a));
  }
  return CoefficientVector::dense(x, solve_by_weighted_qr(p, w, rhs));
}

CoefficientVector shepard_coefficients(const MlsProblem& problem, const Point& x) {
  if (problem.basis().degree() != 0) throw InvalidArgument("shepard coefficients need a degree-0 basis");
  const Eigen::Index n = problem.nodes().size();
  if (auto j = problem.snapped_node(x)) return CoefficientVector::cardinal(x, n, *j);
  Eigen::VectorXd w = problem.normalized_weights(x);
  w /= w.sum();
  return CoefficientVector::dense(x, std::move(w));
}

double evaluate(const MlsProblem& problem, const Eigen::VectorXd& samples, const Point& x) {
  return coefficients(problem, x).dot(samples);
}

ShepardEngine::ShepardEngine(MlsProblem problem) : problem_(std::move(problem)) {
  if (problem_.basis().degree() != 0) throw InvalidArgument("shepard engine requires degree 0");
}

}  // namespace fdpr
