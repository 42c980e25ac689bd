// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "fdpr/analysis.hpp"
#include "fdpr/errors.hpp"

using namespace fdpr;

namespace {

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

NodeSet grid(const Domain& domain, int per_axis, double jitter = 0.0, std::uint64_t seed = 1) {
  const std::vector<int> counts(static_cast<std::size_t>(domain.dim()), per_axis);
  NodeSet nodes = generate_grid(domain, counts);
  return jitter > 0.0 ? perturb(nodes, jitter, seed) : nodes;
}

PointMatrix random_points(const Domain& domain, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointMatrix p(n, domain.dim());
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < domain.dim(); ++a) p(i, a) = domain.lower()[a] + domain.width(a) * u(rng);
  return p;
}

bool within_rel(double value, double target, double tol) { return std::abs(value - target) <= tol * target; }

// 1. polynomial reproduction for every engine
bool criterion1() {
  bool ok = true;
  const std::vector<EngineKind> kinds = {EngineKind::mls, EngineKind::shepard, EngineKind::l1_cold,
                                         EngineKind::l1_warm, EngineKind::l1_colgen};
  for (int d : {1, 2}) {
    const Domain domain = d == 1 ? Domain({-1.0}, {1.0}) : Domain::cube(2, 0.0, 1.0);
    const NodeSet nodes = grid(domain, d == 1 ? 17 : 8, 0.3, 11);
    const PointMatrix points = random_points(domain, 200, 100 + d);
    for (EngineKind kind : kinds) {
      const int top = kind == EngineKind::shepard ? 0 : (d == 1 ? 4 : 2);
      double worst = 0.0;
      for (int m = 0; m <= top; ++m) {
        EngineConfig cfg;
        cfg.kind = kind;
        cfg.degree = m;
        const auto engine = make_engine(cfg, nodes);
        worst = std::max(worst, reproduction_residual(*engine, points, 50, 1000 + 10 * m + d));
      }
      const bool pass = worst <= 1e-8;
      ok = ok && pass;
      detail("d=%d %-9s m=0..%d  max residual %.2e %s", d, to_string(kind).c_str(), top, worst, pass ? "" : "<-");
    }
  }
  return ok;
}

// 2. algebraic-decay table, sin(pi x) on [-1, 1]
bool criterion2() {
  const std::vector<int> counts = {8, 16, 32, 64};
  const double mls_ref[] = {5.61e-1, 1.01e-1, 2.02e-2, 5.07e-3};
  const double lp_ref[] = {6.82e-2, 1.52e-2, 4.41e-3, 9.31e-4};
  const Domain domain({-1.0}, {1.0});
  std::vector<NodeSet> sets;
  for (int n : counts) sets.push_back(grid(domain, n));
  const TargetFunction f = make_target("sin-pi", 1);
  const EvalGrid eval = default_eval_grid(domain);

  bool ok = true;
  auto row = [&](const char* label, EngineKind kind, double k, const double* ref) {
    EngineConfig cfg;
    cfg.kind = kind;
    cfg.degree = 1;
    cfg.weight = WeightSpec::algebraic(k);
    const ConvergenceReport r = convergence_study(cfg, f, sets, eval);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double e = r.levels[i].sup_error;
      const bool pass = within_rel(e, ref[i], 0.25);
      ok = ok && pass;
      detail("%s k=%.1f N=%-3d error %.3e  table %.2e  ratio %.2f %s", label, k, counts[i], e, ref[i], e / ref[i],
             pass ? "" : "<-");
    }
  };
  row("mls", EngineKind::mls, 6.2, mls_ref);
  row("lp ", EngineKind::l1_warm, 3.1, lp_ref);
  return ok;
}

// 3. convergence order for sin(pi x)
bool criterion3() {
  const Domain domain({-1.0}, {1.0});
  std::vector<NodeSet> sets;
  for (int n : {8, 16, 32, 64, 128}) sets.push_back(grid(domain, n));
  const TargetFunction f = make_target("sin-pi", 1);
  bool ok = true;
  for (EngineKind kind : {EngineKind::mls, EngineKind::l1_warm}) {
    for (int m : {1, 2}) {
      EngineConfig cfg;
      cfg.kind = kind;
      cfg.degree = m;
      cfg.delta = {DeltaMode::fill, 5.0};
      const ConvergenceReport r = convergence_study(cfg, f, sets, default_eval_grid(domain));
      const bool pass = r.slope && *r.slope >= m + 1 - 0.35;
      ok = ok && pass;
      detail("%-7s m=%d slope %.3f (needs >= %.2f) %s", to_string(kind).c_str(), m, r.slope.value_or(NAN), m + 0.65,
             pass ? "" : "<-");
    }
  }
  return ok;
}

// 4. Franke tables on [0, 1]^2
bool criterion4() {
  const std::vector<int> per_axis = {26, 27, 28, 29, 30, 31};
  const double mls1[] = {1.52e-1, 1.43e-1, 1.35e-1, 1.27e-1, 1.20e-1, 1.13e-1};
  const double mls2[] = {4.81e-2, 4.46e-2, 4.14e-2, 3.83e-2, 3.55e-2, 3.29e-2};
  const double lp1[] = {1.68e-2, 1.55e-2, 1.48e-2, 1.35e-2, 1.29e-2, 9.66e-3};
  const Domain domain = Domain::cube(2, 0.0, 1.0);
  std::vector<NodeSet> sets;
  for (int n : per_axis) sets.push_back(grid(domain, n));
  const TargetFunction f = make_target("franke", 2);
  const EvalGrid eval = default_eval_grid(domain);

  bool ok = true;
  auto row = [&](const char* label, EngineKind kind, int m, const double* ref, bool factor_two) {
    EngineConfig cfg;
    cfg.kind = kind;
    cfg.degree = m;
    cfg.family = BasisFamily::monomial;
    cfg.delta = {DeltaMode::diameter, 30.0};
    const ConvergenceReport r = convergence_study(cfg, f, sets, eval);
    for (std::size_t i = 0; i < per_axis.size(); ++i) {
      const double e = r.levels[i].sup_error;
      const double ratio = e / ref[i];
      const bool pass = r.certifiable && (factor_two ? ratio >= 0.5 && ratio <= 2.0 : within_rel(e, ref[i], 0.30));
      ok = ok && pass;
      detail("%s N=%-3td error %.3e  table %.2e  ratio %.2f %s", label, r.levels[i].nodes, e, ref[i], ratio,
             pass ? "" : "<-");
    }
  };
  row("mls m=1", EngineKind::mls, 1, mls1, false);
  row("mls m=2", EngineKind::mls, 2, mls2, false);
  row("lp  m=1", EngineKind::l1_warm, 1, lp1, true);
  return ok;
}

// 5. Lebesgue constants, d = 2, m = 2
bool criterion5() {
  const Domain domain = Domain::cube(2, 0.0, 1.0);
  const EvalGrid eval = default_eval_grid(domain);
  bool ok = true;
  for (EngineKind kind : {EngineKind::mls, EngineKind::l1_warm}) {
    const double lo = kind == EngineKind::mls ? 2.0 : 1.0;
    const double hi = kind == EngineKind::mls ? 2.3 : 1.05;
    for (int n : {13, 15, 17, 19, 21, 23}) {
      EngineConfig cfg;
      cfg.kind = kind;
      cfg.degree = 2;
      cfg.family = BasisFamily::monomial;
      cfg.delta = {DeltaMode::diameter, 5.0};
      const auto engine = make_engine(cfg, grid(domain, n));
      const ScanReport r = lebesgue_scan(*engine, eval);
      const bool pass = r.certifiable() && r.lebesgue_constant >= lo && r.lebesgue_constant <= hi;
      ok = ok && pass;
      detail("%-7s N=%-3d lebesgue %.6f  band [%.2f, %.2f] %s", to_string(kind).c_str(), n * n, r.lebesgue_constant,
             lo, hi, pass ? "" : "<-");
    }
  }
  return ok;
}

// 6. simplex against vertex enumeration on small node sets
bool criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int solved = 0, mismatches = 0, dense = 0;
  double worst = 0.0;
  while (solved < 500) {
    const int d = 1 + static_cast<int>(rng() % 2);
    const int m = d == 1 ? static_cast<int>(rng() % 3) : static_cast<int>(rng() % 2);
    const Eigen::Index q = dimension(m, d);
    const int n = static_cast<int>(q) + static_cast<int>(rng() % static_cast<unsigned>(7 - q));
    PointMatrix pts(n, d);
    for (Eigen::Index k = 0; k < pts.size(); ++k) pts.data()[k] = u(rng);
    const NodeSet nodes(Domain::cube(d, 0.0, 1.0), pts);
    if (!unisolvency_check(vandermonde(BasisSpec(m, d), nodes)).unisolvent) continue;
    const WeightSpec w = rng() % 2 ? WeightSpec::gaussian(1.0) : WeightSpec::exponential(1.0);
    const LpContext ctx(nodes, BasisSpec(m, d), w, 0.2 + u(rng));
    Point x(d);
    for (int a = 0; a < d; ++a) x[a] = u(rng);
    const LpProblem prob = build_lp(ctx, x);
    const LpSolution s = simplex_solve(prob);
    const auto ref = oracle::enumerate_vertices(prob.lp);
    const double err = std::abs(s.objective - prob.cost_scale * ref.objective) / std::max(1.0, s.objective);
    worst = std::max(worst, err);
    if (s.status != LpStatus::optimal || err > 1e-9) ++mismatches;
    if (s.coefficients.nonzeros() > q) ++dense;
    ++solved;
  }
  detail("500 instances, max relative objective gap %.2e, mismatches %d, vertices above Q %d", worst, mismatches,
         dense);
  return mismatches == 0 && dense == 0;
}

// 7. cold, warm and column-generation strategies along sweeps
bool criterion7() {
  bool ok = true;
  for (int d : {1, 2}) {
    const Domain domain = d == 1 ? Domain({-1.0}, {1.0}) : Domain::cube(2, 0.0, 1.0);
    const NodeSet nodes = grid(domain, d == 1 ? 33 : 10, 0.2, 3);
    const BasisSpec basis(2, d);
    const LpContext ctx(nodes, basis, WeightSpec::gaussian(1.0), 5.0 * nodes.fill_distance());
    LpState state;
    long cold_pivots = 0, warm_pivots = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double t = i / 99.0;
      Point x(d);
      if (d == 1) x[0] = -1.0 + 2.0 * t;
      else x << t, 0.5 + 0.4 * std::sin(2 * std::numbers::pi * t);
      const LpProblem prob = build_lp(ctx, x);
      const LpSolution cold = simplex_solve(prob);
      const LpSolution warm = warm_start_solve(prob, state);
      const LpSolution cg = column_generation_solve(prob, default_initial_columns(prob));
      cold_pivots += cold.iterations;
      warm_pivots += warm.iterations;
      const double scale = std::max(1.0, std::abs(cold.objective));
      worst = std::max({worst, std::abs(warm.objective - cold.objective) / scale,
                        std::abs(cg.objective - cold.objective) / scale});
    }
    const bool agree = worst <= 1e-9;
    const bool cheaper = d != 1 || warm_pivots <= cold_pivots / 2;
    ok = ok && agree && cheaper;
    detail("d=%d  max objective gap %.2e  pivots cold %ld warm %ld (%.0f%%) %s", d, worst, cold_pivots, warm_pivots,
           100.0 * warm_pivots / std::max(1L, cold_pivots), agree && cheaper ? "" : "<-");
  }
  return ok;
}

// 8. MLS lambda system against the KKT saddle solve
bool criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int done = 0;
  double worst = 0.0;
  while (done < 200) {
    const int d = 1 + static_cast<int>(rng() % 2);
    const int m = static_cast<int>(rng() % (d == 1 ? 4 : 3));
    const Eigen::Index q = dimension(m, d);
    const int n = static_cast<int>(q) + static_cast<int>(rng() % static_cast<unsigned>(13 - q));
    PointMatrix pts(n, d);
    for (Eigen::Index k = 0; k < pts.size(); ++k) pts.data()[k] = u(rng);
    const NodeSet nodes(Domain::cube(d, 0.0, 1.0), pts);
    const BasisSpec basis(m, d, BasisFamily::chebyshev, Domain::cube(d, 0.0, 1.0));
    if (!unisolvency_check(vandermonde(basis, nodes)).unisolvent) continue;
    const WeightSpec w = rng() % 2 ? WeightSpec::gaussian(1.0) : WeightSpec::exponential(2.0);
    const MlsProblem prob(nodes, basis, w, 0.3 + u(rng));
    Point x(d);
    for (int a = 0; a < d; ++a) x[a] = u(rng);
    const Eigen::VectorXd a = coefficients(prob, x).to_dense();
    const Eigen::VectorXd ref = oracle::kkt_solve(prob.vandermonde(), prob.normalized_weights(x), basis.eval(x));
    worst = std::max(worst, (a - ref).cwiseAbs().maxCoeff());
    ++done;
  }
  detail("200 instances, max |a - a_kkt| %.2e", worst);
  return worst <= 1e-8;
}

// 9. stability series against closed forms
bool criterion9() {
  bool ok = true;
  for (double nu : {1.0, std::numbers::ln2}) {
    const double rho = std::exp(-nu);
    // sum (n+1)^(d-1) rho^n for d = 1, 2, 3
    const double closed[] = {1.0 / (1.0 - rho), 1.0 / std::pow(1.0 - rho, 2), (1.0 + rho) / std::pow(1.0 - rho, 3)};
    for (int d = 1; d <= 3; ++d) {
      const StabilityBound b = stability_bound(1.0, WeightSpec::exponential(nu), d, 0);
      const double want = std::pow(3.0, d) * closed[d - 1];
      const double rel = std::abs(b.k - want) / want;
      const bool pass = rel <= 1e-10;
      ok = ok && pass;
      detail("rho=%.4f d=%d  K %.12f  closed form %.12f  rel %.1e %s", rho, d, b.k, want, rel, pass ? "" : "<-");
    }
  }
  for (auto [k, d, ell] : {std::tuple{1.5, 1, 0}, {2.0, 1, 0}, {3.0, 2, 0}, {3.9, 2, 1}, {0.5, 1, 0}}) {
    bool raised = false;
    try {
      stability_bound(1.0, WeightSpec::algebraic(k), d, ell);
    } catch (const DivergentSeries&) {
      raised = true;
    }
    ok = ok && raised;
    detail("algebraic k=%.1f d=%d ell=%d  divergence %s", k, d, ell, raised ? "raised" : "NOT raised <-");
  }
  return ok;
}

// 10. Shepard identity at m = 0
bool criterion10() {
  bool ok = true;
  const std::vector<WeightSpec> weights = {WeightSpec::gaussian(1.0), WeightSpec::exponential(1.0),
                                           WeightSpec::algebraic(6.2)};
  for (int d : {1, 2}) {
    const Domain domain = d == 1 ? Domain({-1.0}, {1.0}) : Domain::cube(2, 0.0, 1.0);
    const NodeSet nodes = grid(domain, d == 1 ? 21 : 9, 0.3, 5);
    const EvalGrid eval = uniform_grid(domain, std::vector<int>(static_cast<std::size_t>(d), d == 1 ? 2001 : 101));
    for (const auto& w : weights) {
      for (EngineKind kind : {EngineKind::shepard, EngineKind::mls, EngineKind::l1_warm}) {
        EngineConfig cfg;
        cfg.kind = kind;
        cfg.degree = 0;
        cfg.weight = w;
        auto engine = make_engine(cfg, nodes);
        double unity = 0.0, lebesgue = 0.0;
        for (Eigen::Index i = 0; i < eval.size(); ++i) {
          const Eigen::VectorXd a = engine->coefficients(eval.points.row(i).transpose()).to_dense();
          unity = std::max(unity, std::abs(a.sum() - 1.0));
          lebesgue = std::max(lebesgue, std::abs(a.cwiseAbs().sum() - 1.0));
        }
        const bool pass = unity <= 1e-14 && lebesgue <= 1e-14;
        ok = ok && pass;
        detail("d=%d %-30s %-8s |sum-1| %.1e  |L-1| %.1e %s", d, w.to_string().c_str(), to_string(kind).c_str(), unity,
               lebesgue, pass ? "" : "<-");
      }
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<bool()>>> criteria = {
      {"polynomial reproduction", criterion1},     {"algebraic-decay table", criterion2},
      {"convergence order", criterion3},           {"Franke tables", criterion4},
      {"Lebesgue constants", criterion5},          {"simplex vs enumeration", criterion6},
      {"strategy equivalence", criterion7},        {"MLS vs KKT", criterion8},
      {"stability series", criterion9},            {"Shepard identity", criterion10},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string error;
    try {
      pass = criteria[i].second();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("CRITERION %2d %-24s %s  (%.1f s)%s%s\n", id, criteria[i].first, pass ? "PASS" : "FAIL", secs,
                error.empty() ? "" : "  error: ", error.c_str());
    std::fflush(stdout);
    failed += !pass;
  }
  return failed ? 1 : 0;
}
