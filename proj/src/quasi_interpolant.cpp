#include "fdpr/quasi_interpolant.hpp"

#include <cmath>
#include <numeric>

#include "fdpr/errors.hpp"

namespace fdpr {

CoefficientVector CoefficientVector::dense(Point at, Eigen::VectorXd values) {
  CoefficientVector c;
  c.at_ = std::move(at);
  c.size_ = values.size();
  c.dense_ = true;
  c.values_ = std::move(values);
  return c;
}

CoefficientVector CoefficientVector::sparse(Point at, Eigen::Index size, std::vector<Eigen::Index> support,
                                            std::vector<double> values) {
  if (support.size() != values.size()) throw InvalidArgument("sparse coefficients: index/value length mismatch");
  CoefficientVector c;
  c.at_ = std::move(at);
  c.size_ = size;
  c.dense_ = false;
  c.support_ = std::move(support);
  c.values_ = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  for (auto j : c.support_)
    if (j < 0 || j >= size) throw InvalidArgument("sparse coefficients: index out of range");
  return c;
}

CoefficientVector CoefficientVector::cardinal(Point at, Eigen::Index size, Eigen::Index j) {
  return sparse(std::move(at), size, {j}, {1.0});
}

std::vector<Eigen::Index> CoefficientVector::support() const {
  if (!dense_) return support_;
  std::vector<Eigen::Index> all(static_cast<std::size_t>(size_));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  return all;
}

double CoefficientVector::value(Eigen::Index j) const {
  if (dense_) return values_[j];
  for (std::size_t k = 0; k < support_.size(); ++k)
    if (support_[k] == j) return values_[static_cast<Eigen::Index>(k)];
  return 0.0;
}

Eigen::VectorXd CoefficientVector::to_dense() const {
  if (dense_) return values_;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size_);
  for (std::size_t k = 0; k < support_.size(); ++k) out[support_[k]] += values_[static_cast<Eigen::Index>(k)];
  return out;
}

Eigen::Index CoefficientVector::nonzeros(double tol) const {
  return (values_.array().abs() > tol).count();
}

double CoefficientVector::dot(const Eigen::VectorXd& samples) const {
  if (samples.size() != size_) throw InvalidArgument("sample vector length does not match node count");
  if (dense_) return values_.dot(samples);
  double s = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) s += values_[static_cast<Eigen::Index>(k)] * samples[support_[k]];
  return s;
}

double CoefficientVector::abs_sum() const { return values_.cwiseAbs().sum(); }

double CoefficientVector::weighted_moment(const PointMatrix& nodes, int ell, double q) const {
  double s = 0.0;
  const auto idx = support();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double r = (nodes.row(idx[k]).transpose() - at_).norm() / q;
    s += std::pow(r, ell) * std::abs(values_[static_cast<Eigen::Index>(k)]);
  }
  return s;
}

}  // namespace fdpr
