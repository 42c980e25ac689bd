#pragma once

#include <optional>

#include "fdpr/poly_basis.hpp"
#include "fdpr/quasi_interpolant.hpp"
#include "fdpr/weights.hpp"

namespace fdpr {

/// Moving least squares set-up: nodes, polynomial basis (with its cached
/// Vandermonde), weight profile and length scale. Immutable once built.
class MlsProblem {
 public:
  /// `snap_tol` defaults to 1e-12 * scale. Throws InvalidArgument when the
  /// nodes are not unisolvent for the basis or the scale is not positive.
  MlsProblem(NodeSet nodes, BasisSpec basis, WeightSpec weights, double scale,
             std::optional<double> snap_tol = std::nullopt);

  const NodeSet& nodes() const noexcept { return nodes_; }
  const BasisSpec& basis() const noexcept { return basis_; }
  const WeightSpec& weights() const noexcept { return weights_; }
  double scale() const noexcept { return scale_; }
  double snap_tol() const noexcept { return snap_tol_; }
  const Eigen::MatrixXd& vandermonde() const noexcept { return p_; }

  /// Node within snap_tol of x when the weight diverges at zero.
  std::optional<Eigen::Index> snapped_node(const Point& x) const;

  /// w(x, x_j) / max_i w(x, x_i), floored at kWeightFloor. Scale-free, so it
  /// is safe for algebraic profiles close to a node.
  Eigen::VectorXd normalized_weights(const Point& x) const;

 private:
  NodeSet nodes_;
  BasisSpec basis_;
  WeightSpec weights_;
  double scale_;
  double snap_tol_;
  Eigen::MatrixXd p_;
};

struct GramSystem {
  Eigen::MatrixXd matrix;  ///< G(k, l) = sum_j w(x, x_j) p_k(x_j) p_l(x_j)
  Eigen::VectorXd rhs;     ///< p_l(x)
};

/// Normal equations for the Lagrange multipliers, in unnormalised weights.
GramSystem gram_system(const MlsProblem& problem, const Point& x);

/// a*(x) = W P lambda with G lambda = p(x). Falls back to a row-sorted,
/// column-pivoted QR of W^1/2 P when the LDL^T pivots spread beyond 1e8.
/// Throws IllConditioned when that route cannot reproduce p(x) either.
CoefficientVector coefficients(const MlsProblem& problem, const Point& x);

/// Degree-0 closed form a_j = w_j / sum_i w_i. Requires a degree-0 basis.
CoefficientVector shepard_coefficients(const MlsProblem& problem, const Point& x);

double evaluate(const MlsProblem& problem, const Eigen::VectorXd& samples, const Point& x);

class MlsEngine : public QuasiInterpolant {
 public:
  explicit MlsEngine(MlsProblem problem) : problem_(std::move(problem)) {}

  CoefficientVector coefficients(const Point& x) override { return fdpr::coefficients(problem_, x); }
  std::unique_ptr<QuasiInterpolant> clone() const override { return std::make_unique<MlsEngine>(*this); }
  const NodeSet& nodes() const override { return problem_.nodes(); }
  int degree() const override { return problem_.basis().degree(); }
  std::string name() const override { return "mls"; }
  const MlsProblem& problem() const noexcept { return problem_; }

 private:
  MlsProblem problem_;
};

class ShepardEngine : public QuasiInterpolant {
 public:
  explicit ShepardEngine(MlsProblem problem);

  CoefficientVector coefficients(const Point& x) override { return shepard_coefficients(problem_, x); }
  std::unique_ptr<QuasiInterpolant> clone() const override { return std::make_unique<ShepardEngine>(*this); }
  const NodeSet& nodes() const override { return problem_.nodes(); }
  int degree() const override { return 0; }
  std::string name() const override { return "shepard"; }

 private:
  MlsProblem problem_;
};

}  // namespace fdpr
