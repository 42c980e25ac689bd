#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fdpr/errors.hpp"
#include "fdpr/node_geometry.hpp"

using namespace fdpr;
using doctest::Approx;

namespace {

NodeSet grid1(double lo, double hi, int n) {
  const int c[] = {n};
  return generate_grid(Domain({lo}, {hi}), c);
}

NodeSet grid2(int n) {
  const int c[] = {n, n};
  return generate_grid(Domain::cube(2, 0.0, 1.0), c);
}

}  // namespace

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(Domain({0.0}, {0.0}), InvalidArgument);
  CHECK_THROWS_AS(Domain({}, {}), InvalidArgument);
  const Domain d = Domain::cube(2, -1.0, 1.0);
  CHECK(d.dim() == 2);
  CHECK(d.diameter() == Approx(2.0 * std::sqrt(2.0)));
  CHECK(d.contains(Point::Zero(2)));
  CHECK_FALSE(d.contains(Point::Constant(2, 1.5)));
}

TEST_CASE("grid generation") {
  const NodeSet g = grid1(0.0, 1.0, 3);
  REQUIRE(g.size() == 3);
  CHECK(g.points()(1, 0) == 0.5);
  CHECK(g.separation_radius() == Approx(0.25));
  CHECK(g.fill_distance() == Approx(0.25));

  const NodeSet two = grid1(0.0, 1.0, 2);
  CHECK(two.separation_radius() == Approx(0.5));
  CHECK(two.fill_distance() == Approx(0.5));

  const NodeSet g2 = grid2(3);
  CHECK(g2.size() == 9);
  CHECK(g2.separation_radius() == Approx(0.25));
  CHECK(g2.fill_distance() == Approx(0.25 * std::sqrt(2.0)).epsilon(1e-12));
  // last axis fastest
  CHECK(g2.points()(1, 0) == 0.0);
  CHECK(g2.points()(1, 1) == 0.5);

  const int zero[] = {0};
  CHECK_THROWS_AS(generate_grid(Domain({0.0}, {1.0}), zero), InvalidArgument);
  const int wrong[] = {3};
  CHECK_THROWS_AS(generate_grid(Domain::cube(2, 0.0, 1.0), wrong), InvalidArgument);
}

TEST_CASE("separation radius") {
  PointMatrix p(3, 1);
  p << 0.0, 0.1, 1.0;
  CHECK(separation_radius(p) == Approx(0.05));
  PointMatrix one(1, 1);
  one << 0.0;
  CHECK_THROWS_AS(separation_radius(one), InvalidArgument);
}

TEST_CASE("coincident and outside nodes are rejected") {
  PointMatrix p(2, 1);
  p << 0.3, 0.3;
  CHECK_THROWS_AS(NodeSet(Domain({0.0}, {1.0}), p), InvalidArgument);
  p << 0.3, 1.3;
  CHECK_THROWS_AS(NodeSet(Domain({0.0}, {1.0}), p), InvalidArgument);
}

TEST_CASE("quasi-uniformity of grids") {
  CHECK(grid1(-1.0, 1.0, 9).quasi_uniformity() == Approx(1.0));
  CHECK(grid2(3).quasi_uniformity() == Approx(std::sqrt(2.0)));
  const int c3[] = {4, 4, 4};
  CHECK(generate_grid(Domain::cube(3, 0.0, 1.0), c3).quasi_uniformity() == Approx(std::sqrt(3.0)));
}

TEST_CASE("fill distance refinement is monotone and bounded below by q") {
  const NodeSet g = perturb(grid2(6), 0.3, 11);
  double prev = 0.0;
  for (int r : {5, 10, 20, 40, 80}) {
    const double h = fill_distance(g, r);
    CHECK(h >= prev - 1e-15);
    prev = h;
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const NodeSet s = perturb(grid1(0.0, 1.0, 12), 0.4, seed);
    CHECK(s.separation_radius() <= s.fill_distance() * (1.0 + 1e-12));
  }
}

TEST_CASE("perturbation") {
  const NodeSet g = grid1(-1.0, 1.0, 5);
  const NodeSet same = perturb(g, 0.0, 3);
  CHECK(same.points() == g.points());

  const NodeSet a = perturb(g, 0.3, 7);
  const NodeSet b = perturb(g, 0.3, 7);
  CHECK(a.points() == b.points());
  CHECK(a.points() != g.points());
  CHECK(a.points()(0, 0) == -1.0);
  CHECK(a.points()(4, 0) == 1.0);
  CHECK(2.0 * a.separation_radius() >= (1.0 - 2 * 0.3) * 0.5 - 1e-15);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const NodeSet p = perturb(grid1(-1.0, 1.0, 17), 0.3, seed);
    CHECK(p.quasi_uniformity() <= 4.0 + 1e-12);
    for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(p.domain().contains(p.point(i)));
  }
  CHECK_THROWS_AS(perturb(g, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(perturb(g, -0.1, 1), InvalidArgument);
}

TEST_CASE("delta scaling") {
  const NodeSet g = grid1(0.0, 1.0, 3);
  CHECK(scale_delta({DeltaMode::fill, 5.0}, g) == Approx(1.25));
  CHECK(scale_delta({DeltaMode::separation, 1.0}, g) == Approx(0.25));
  CHECK(scale_delta({DeltaMode::diameter, 5.0}, g) == Approx(2.5));
  const NodeSet fine = grid1(0.0, 1.0, 11);
  CHECK(scale_delta({DeltaMode::fill, 30.0}, fine) == Approx(1.5));
  CHECK_THROWS_AS(scale_delta({DeltaMode::fill, 0.0}, g), InvalidArgument);
}

TEST_CASE("csv round trip") {
  const NodeSet p = perturb(grid2(4), 0.2, 5);
  std::stringstream ss;
  write_csv(ss, p);
  CHECK(ss.str().rfind("x0,x1\n", 0) == 0);
  const NodeSet back = read_csv(ss, p.domain());
  CHECK(back.points() == p.points());

  std::stringstream bad("x0\n0.1\nfoo\n");
  try {
    read_csv(bad, Domain({0.0}, {1.0}));
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
