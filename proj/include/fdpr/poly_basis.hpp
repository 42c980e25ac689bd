#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fdpr/node_geometry.hpp"

namespace fdpr {

enum class BasisFamily { monomial, chebyshev };

using MultiIndex = std::vector<int>;

/// Number of multi-indices with |alpha| <= m in d variables, C(m+d, d).
Eigen::Index dimension(int degree, int dim);

/// Multi-indices of total degree <= m in graded-lex order: by total degree,
/// then by descending exponent of the first variable, then the second, ...
std::vector<MultiIndex> graded_lex_indices(int degree, int dim);

/// Basis p_1..p_Q of pi_m(R^d). Chebyshev members are tensor products
/// T_a0(z0) T_a1(z1) ... with z the affine image of x in [-1,1]^d.
class BasisSpec {
 public:
  BasisSpec(int degree, int dim, BasisFamily family = BasisFamily::monomial,
            std::optional<Domain> box = std::nullopt);

  int degree() const noexcept { return degree_; }
  int dim() const noexcept { return dim_; }
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(indices_.size()); }
  BasisFamily family() const noexcept { return family_; }
  const std::optional<Domain>& box() const noexcept { return box_; }
  const std::vector<MultiIndex>& multi_indices() const noexcept { return indices_; }

  void eval(const Point& x, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd eval(const Point& x) const;

 private:
  int degree_;
  int dim_;
  BasisFamily family_;
  std::optional<Domain> box_;
  std::vector<MultiIndex> indices_;
};

inline Eigen::VectorXd eval_basis(const BasisSpec& spec, const Point& x) { return spec.eval(x); }

/// P with P(i, k) = p_k(x_i).
class Vandermonde {
 public:
  Vandermonde(const BasisSpec& spec, const PointMatrix& points);

  const Eigen::MatrixXd& matrix() const noexcept { return p_; }
  Eigen::Index rows() const noexcept { return p_.rows(); }
  Eigen::Index cols() const noexcept { return p_.cols(); }

 private:
  Eigen::MatrixXd p_;
};

Vandermonde vandermonde(const BasisSpec& spec, const NodeSet& nodes);

struct UnisolvencyReport {
  bool unisolvent = false;
  Eigen::Index rank = 0;
  double smallest_pivot = 0.0;  ///< |R_kk| of the last pivot kept (0 when rank is 0)
  double largest_pivot = 0.0;
};

/// Rank of P by column-pivoted QR with threshold 1e-10 * largest pivot.
UnisolvencyReport unisolvency_check(const Vandermonde& v);

}  // namespace fdpr
