#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fdpr/node_geometry.hpp"

namespace fdpr {

/// Values a_1(x)..a_N(x) of the basis functions at one evaluation point.
/// Dense vectors store all N entries; sparse ones only their support.
class CoefficientVector {
 public:
  CoefficientVector() = default;
  static CoefficientVector dense(Point at, Eigen::VectorXd values);
  static CoefficientVector sparse(Point at, Eigen::Index size, std::vector<Eigen::Index> support,
                                  std::vector<double> values);
  /// Unit vector e_j, the exact answer at a node for divergent weights.
  static CoefficientVector cardinal(Point at, Eigen::Index size, Eigen::Index j);

  const Point& at() const noexcept { return at_; }
  Eigen::Index size() const noexcept { return size_; }
  bool is_dense() const noexcept { return dense_; }

  /// Indices carried explicitly (all of 0..N-1 when dense).
  std::vector<Eigen::Index> support() const;
  double value(Eigen::Index j) const;
  Eigen::VectorXd to_dense() const;

  /// Entries with |a_j| > tol.
  Eigen::Index nonzeros(double tol = 0.0) const;
  double dot(const Eigen::VectorXd& samples) const;
  double abs_sum() const;
  /// sum_j |x - x_j|^ell |a_j| / q^ell
  double weighted_moment(const PointMatrix& nodes, int ell, double q) const;

 private:
  Point at_;
  Eigen::Index size_ = 0;
  bool dense_ = true;
  std::vector<Eigen::Index> support_;
  Eigen::VectorXd values_;
};

/// Anything that produces coefficients a*(x) reproducing pi_m on a node set.
/// Implementations may keep warm-start state, so coefficients() is non-const;
/// use clone() to give each worker its own instance.
class QuasiInterpolant {
 public:
  virtual ~QuasiInterpolant() = default;

  virtual CoefficientVector coefficients(const Point& x) = 0;
  virtual std::unique_ptr<QuasiInterpolant> clone() const = 0;
  virtual const NodeSet& nodes() const = 0;
  virtual int degree() const = 0;
  virtual std::string name() const = 0;
  /// Drops any state carried between evaluation points.
  virtual void reset() {}

  double evaluate(const Eigen::VectorXd& samples, const Point& x) { return coefficients(x).dot(samples); }
};

}  // namespace fdpr
