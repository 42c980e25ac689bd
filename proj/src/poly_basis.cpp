#include "fdpr/poly_basis.hpp"

#include <cmath>
#include <functional>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

constexpr double kRankTol = 1e-10;

}  // namespace

Eigen::Index dimension(int degree, int dim) {
  if (degree < 0 || dim < 1) throw InvalidArgument("polynomial space needs degree >= 0 and dim >= 1");
  // C(m+d, d) built incrementally stays integral at every step.
  Eigen::Index q = 1;
  for (int i = 1; i <= dim; ++i) q = q * (degree + i) / i;
  return q;
}

std::vector<MultiIndex> graded_lex_indices(int degree, int dim) {
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(dimension(degree, dim)));
  MultiIndex alpha(dim, 0);
  // Fill axis `a` with every exponent from `left` down to 0, remainder goes right.
  std::function<void(int, int)> fill = [&](int a, int left) {
    if (a == dim - 1) {
      alpha[a] = left;
      out.push_back(alpha);
      return;
    }
    for (int e = left; e >= 0; --e) {
      alpha[a] = e;
      fill(a + 1, left - e);
    }
  };
  for (int total = 0; total <= degree; ++total) fill(0, total);
  return out;
}

BasisSpec::BasisSpec(int degree, int dim, BasisFamily family, std::optional<Domain> box)
    : degree_(degree), dim_(dim), family_(family), box_(std::move(box)) {
  if (degree < 0) throw InvalidArgument("basis degree must be nonnegative");
  if (dim < 1) throw InvalidArgument("basis dimension must be positive");
  if (family_ == BasisFamily::chebyshev && !box_) throw InvalidArgument("chebyshev basis needs a box");
  if (box_ && box_->dim() != dim_) throw InvalidArgument("basis box dimension mismatch");
  indices_ = graded_lex_indices(degree_, dim_);
}

void BasisSpec::eval(const Point& x, Eigen::Ref<Eigen::VectorXd> out) const {
  // table(a, e) = e-th univariate member on axis a
  Eigen::MatrixXd table(dim_, degree_ + 1);
  for (int a = 0; a < dim_; ++a) {
    double z = x[a];
    table(a, 0) = 1.0;
    if (family_ == BasisFamily::chebyshev) {
      const double lo = box_->lower()[a], hi = box_->upper()[a];
      z = (2.0 * z - lo - hi) / (hi - lo);
      if (degree_ >= 1) table(a, 1) = z;
      for (int e = 2; e <= degree_; ++e) table(a, e) = 2.0 * z * table(a, e - 1) - table(a, e - 2);
    } else {
      for (int e = 1; e <= degree_; ++e) table(a, e) = table(a, e - 1) * z;
    }
  }
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= table(a, indices_[k][a]);
    out[static_cast<Eigen::Index>(k)] = v;
  }
}

Eigen::VectorXd BasisSpec::eval(const Point& x) const {
  Eigen::VectorXd out(size());
  eval(x, out);
  return out;
}

Vandermonde::Vandermonde(const BasisSpec& spec, const PointMatrix& points) : p_(points.rows(), spec.size()) {
  if (points.cols() != spec.dim()) throw InvalidArgument("vandermonde: point dimension mismatch");
  Eigen::VectorXd row(spec.size());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    spec.eval(points.row(i).transpose(), row);
    p_.row(i) = row.transpose();
  }
}

Vandermonde vandermonde(const BasisSpec& spec, const NodeSet& nodes) { return Vandermonde(spec, nodes.points()); }

UnisolvencyReport unisolvency_check(const Vandermonde& v) {
  UnisolvencyReport r;
  const auto& p = v.matrix();
  if (p.size() == 0) return r;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(p);
  const Eigen::Index k = std::min(p.rows(), p.cols());
  const auto diag = qr.matrixQR().diagonal().head(k).cwiseAbs();
  r.largest_pivot = diag(0);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (diag(i) <= kRankTol * r.largest_pivot) break;
    r.rank = i + 1;
    r.smallest_pivot = diag(i);
  }
  r.unisolvent = r.rank == p.cols();
  return r;
}

}  // namespace fdpr
