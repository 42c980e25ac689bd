#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "fdpr/errors.hpp"
#include "fdpr/mls_engine.hpp"

using namespace fdpr;
using doctest::Approx;

namespace {

NodeSet grid1(int n, double lo = -1.0, double hi = 1.0) {
  const int c[] = {n};
  return generate_grid(Domain({lo}, {hi}), c);
}

double reproduction_error(const MlsProblem& prob, const Point& x, const CoefficientVector& a) {
  return (prob.vandermonde().transpose() * a.to_dense() - prob.basis().eval(x)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("lambda system agrees with the KKT saddle solve") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 2;
    const int m = d == 1 ? trial % 4 : trial % 3;
    const Eigen::Index q = dimension(m, d);
    const int n = static_cast<int>(q) + 1 + static_cast<int>(rng() % 6);
    PointMatrix pts(n, d);
    for (Eigen::Index k = 0; k < pts.size(); ++k) pts.data()[k] = u(rng);
    const NodeSet nodes(Domain::cube(d, 0.0, 1.0), pts);
    const BasisSpec basis(m, d, BasisFamily::chebyshev, Domain::cube(d, 0.0, 1.0));
    const MlsProblem prob(nodes, basis, WeightSpec::gaussian(1.0), 0.4);
    Point x(d);
    for (int a = 0; a < d; ++a) x[a] = u(rng);
    const Eigen::VectorXd a = coefficients(prob, x).to_dense();
    const Eigen::VectorXd ref = oracle::kkt_solve(prob.vandermonde(), prob.normalized_weights(x), basis.eval(x));
    CHECK((a - ref).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("gram system matches the coefficients") {
  const NodeSet nodes = grid1(7);
  const MlsProblem prob(nodes, BasisSpec(2, 1), WeightSpec::exponential(2.0), 0.5);
  const Point x = Point::Constant(1, 0.13);
  const GramSystem g = gram_system(prob, x);
  const Eigen::VectorXd lambda = g.matrix.ldlt().solve(g.rhs);
  Eigen::VectorXd w(nodes.size());
  for (Eigen::Index j = 0; j < nodes.size(); ++j)
    w[j] = eval_weight(prob.weights(), x, nodes.point(j), prob.scale());
  const Eigen::VectorXd via_gram = w.cwiseProduct(prob.vandermonde() * lambda);
  CHECK((via_gram - coefficients(prob, x).to_dense()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("N = Q gives the interpolation solution regardless of weights") {
  PointMatrix pts(2, 1);
  pts << 0.0, 1.0;
  const NodeSet nodes(Domain({0.0}, {1.0}), pts);
  for (double nu : {0.1, 1.0, 30.0}) {
    const MlsProblem prob(nodes, BasisSpec(1, 1), WeightSpec::gaussian(nu), 0.3);
    const Eigen::VectorXd a = coefficients(prob, Point::Constant(1, 0.3)).to_dense();
    CHECK(a[0] == Approx(0.7).epsilon(1e-12));
    CHECK(a[1] == Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("shepard coefficients") {
  const NodeSet nodes = grid1(5);
  const MlsProblem prob(nodes, BasisSpec(0, 1), WeightSpec::gaussian(1.0), 1.25);
  for (double t : {-1.0, -0.3, 0.0, 0.77}) {
    const Point x = Point::Constant(1, t);
    const CoefficientVector s = shepard_coefficients(prob, x);
    CHECK(s.to_dense().sum() == Approx(1.0).epsilon(1e-15));
    CHECK(s.to_dense().minCoeff() >= 0.0);
    CHECK((s.to_dense() - coefficients(prob, x).to_dense()).cwiseAbs().maxCoeff() <= 1e-14);
  }
  const MlsProblem p1(nodes, BasisSpec(1, 1), WeightSpec::gaussian(1.0), 1.25);
  CHECK_THROWS_AS(shepard_coefficients(p1, Point::Zero(1)), InvalidArgument);
  CHECK_THROWS_AS(ShepardEngine{p1}, InvalidArgument);
}

TEST_CASE("algebraic weights snap to the cardinal vector at nodes") {
  const NodeSet nodes = grid1(9);
  const MlsProblem prob(nodes, BasisSpec(1, 1, BasisFamily::chebyshev, nodes.domain()), WeightSpec::algebraic(6.2),
                        nodes.separation_radius());
  const CoefficientVector at = coefficients(prob, nodes.point(3));
  CHECK_FALSE(at.is_dense());
  CHECK(at.value(3) == 1.0);
  CHECK(at.abs_sum() == 1.0);

  // close to, but outside, the snap radius: near-singular weights go through the QR path
  for (double off : {1e-11, 1e-8, 1e-5, 1e-3}) {
    const Point x = nodes.point(3) + Point::Constant(1, off);
    const CoefficientVector a = coefficients(prob, x);
    CHECK(reproduction_error(prob, x, a) <= 1e-10);
    CHECK(a.value(3) == Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("reproduction across degrees and families") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const NodeSet nodes = perturb(grid1(15), 0.3, 7);
  for (int m = 0; m <= 4; ++m) {
    for (const auto& w : {WeightSpec::gaussian(1.0), WeightSpec::exponential(1.0), WeightSpec::algebraic(12.0)}) {
      const double scale = w.family == WeightFamily::algebraic ? nodes.separation_radius() : 5 * nodes.fill_distance();
      const MlsProblem prob(nodes, BasisSpec(m, 1, BasisFamily::chebyshev, nodes.domain()), w, scale);
      for (int k = 0; k < 20; ++k) {
        const Point x = Point::Constant(1, u(rng));
        CHECK(reproduction_error(prob, x, coefficients(prob, x)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("problem validation") {
  PointMatrix pts(2, 1);
  pts << 0.0, 1.0;
  const NodeSet nodes(Domain({0.0}, {1.0}), pts);
  CHECK_THROWS_AS(MlsProblem(nodes, BasisSpec(2, 1), WeightSpec::gaussian(1.0), 1.0), InvalidArgument);
  CHECK_THROWS_AS(MlsProblem(nodes, BasisSpec(1, 1), WeightSpec::gaussian(1.0), 0.0), InvalidArgument);
  CHECK_THROWS_AS(MlsProblem(nodes, BasisSpec(1, 2), WeightSpec::gaussian(1.0), 1.0), InvalidArgument);
}

TEST_CASE("engine interface") {
  const NodeSet nodes = grid1(6);
  MlsEngine e(MlsProblem(nodes, BasisSpec(1, 1), WeightSpec::gaussian(1.0), 1.0));
  CHECK(e.degree() == 1);
  CHECK(e.name() == "mls");
  Eigen::VectorXd f(nodes.size());
  for (Eigen::Index j = 0; j < nodes.size(); ++j) f[j] = 2.0 - 3.0 * nodes.points()(j, 0);
  CHECK(e.evaluate(f, Point::Constant(1, 0.4)) == Approx(0.8));
  auto c = e.clone();
  CHECK(c->evaluate(f, Point::Constant(1, -0.4)) == Approx(3.2));
}
