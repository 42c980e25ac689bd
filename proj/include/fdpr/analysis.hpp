#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdpr/lp_engine.hpp"
#include "fdpr/mls_engine.hpp"

namespace fdpr {

/// Tensor grid of evaluation points, last axis fastest.
struct EvalGrid {
  PointMatrix points;
  std::vector<int> counts;

  Eigen::Index size() const noexcept { return points.rows(); }
};

EvalGrid uniform_grid(const Domain& domain, std::span<const int> counts);
/// 2001 points in 1-D, 101 per axis otherwise.
EvalGrid default_eval_grid(const Domain& domain);

struct TargetFunction {
  std::string name;
  std::function<double(const Point&)> f;

  double operator()(const Point& x) const { return f(x); }
};

/// `sin-pi` (product of sin(pi x_i)), `franke` (2-D only) or
/// `polynomial:c0;c1;...` with monomial coefficients in graded-lex order.
TargetFunction make_target(std::string_view spec, int dim);

double franke(double x, double y);

Eigen::VectorXd sample(const TargetFunction& f, const NodeSet& nodes);

enum class EngineKind { mls, shepard, l1_cold, l1_warm, l1_colgen };

EngineKind parse_engine_kind(std::string_view text);
std::string to_string(EngineKind k);
Method method_of(EngineKind k);

struct EngineConfig {
  EngineKind kind = EngineKind::mls;
  int degree = 1;
  BasisFamily family = BasisFamily::chebyshev;
  WeightSpec weight = WeightSpec::gaussian(1.0);
  DeltaRule delta;
};

/// Length scale handed to the weight: delta from the rule, or q_X.
double weight_scale(const EngineConfig& config, const NodeSet& nodes);

std::unique_ptr<QuasiInterpolant> make_engine(const EngineConfig& config, const NodeSet& nodes);

/// Per-point results of one pass over a grid.
struct ScanReport {
  Eigen::VectorXd lebesgue;  ///< sum_j |a_j(x)|, NaN where the solver failed
  Eigen::VectorXd error;     ///< |f(x) - z(x)|, empty when no target was given
  double lebesgue_constant = 0.0;
  double sup_error = 0.0;
  Eigen::Index failures = 0;
  std::string first_failure;
  long iterations = 0;  ///< simplex pivots, LP engines only

  /// False as soon as one point failed; maxima are then lower estimates.
  bool certifiable() const noexcept { return failures == 0; }
};

/// Worker count: FDPR_THREADS when set, else the hardware concurrency.
int worker_count();

/// Evaluates the engine on every grid point. Points are split into fixed
/// chunks, each handled by its own engine clone in grid order, so results do
/// not depend on the number of workers.
ScanReport scan(const QuasiInterpolant& engine, const EvalGrid& grid, const TargetFunction* target = nullptr,
                const Eigen::VectorXd* samples = nullptr, int workers = 0);

ScanReport lebesgue_scan(const QuasiInterpolant& engine, const EvalGrid& grid, int workers = 0);
double sup_error(const QuasiInterpolant& engine, const TargetFunction& f, const Eigen::VectorXd& samples,
                 const EvalGrid& grid, int workers = 0);

/// max_x sum_j (|x - x_j| / q)^ell |a_j(x)|.
double moment_bound(const QuasiInterpolant& engine, const EvalGrid& grid, int ell);

/// Largest |sum_j p(x_j) a_j(x) - p(x)| over `trials` random polynomials of
/// degree <= m (monomial coefficients in [-1, 1]) and all grid points.
double reproduction_residual(const QuasiInterpolant& engine, const EvalGrid& grid, int trials, std::uint64_t seed);
double reproduction_residual(const QuasiInterpolant& engine, const PointMatrix& points, int trials,
                             std::uint64_t seed);

struct ConvergenceLevel {
  Eigen::Index nodes = 0;
  double h = 0.0;
  double q = 0.0;
  double delta = 0.0;
  double sup_error = 0.0;
  double lebesgue = 0.0;
  double slope_running = 0.0;  ///< against the previous level, NaN on the first
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  std::optional<double> slope;           ///< least squares on (log h, log error)
  std::optional<double> endpoint_slope;  ///< first and last level only
  int target_order = 0;                  ///< m + 1
  bool certifiable = true;
};

/// Errors at or below this are treated as round-off and make slopes undefined.
inline constexpr double kNoiseFloor = 1e-11;

ConvergenceReport convergence_study(const EngineConfig& config, const TargetFunction& f,
                                    const std::vector<NodeSet>& node_sets, const EvalGrid& grid, int workers = 0);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct StabilityBound {
  double k = 0.0;      ///< 3^d C (series + tail); inf when it overflows
  double log_k = 0.0;  ///< natural log of k
  double series = 0.0;
  double tail_bound = 0.0;
  long terms = 0;
};

/// K = 3^d C sum_{n>=0} (n+1)^(d+ell-1) phi(n), with phi the profile of
/// `weights` read at unit scale. Algebraic profiles use phi(1) for n = 0 and
/// add an integral bound for the tail. Throws DivergentSeries when
/// d + ell - k >= -1.
StabilityBound stability_bound(double c, const WeightSpec& weights, int dim, int ell);
StabilityBound stability_bound_log(double log_c, const WeightSpec& weights, int dim, int ell);

struct TheoryConstants {
  double theta = 0.0;
  double radius = 0.0;
  int degree = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double h0 = 0.0;
};

/// Throws UnsupportedAngle for theta > pi/5, InvalidArgument outside (0, pi/2) or for m = 0.
TheoryConstants theory_constants(double theta, double radius, int degree);

/// Constant and profile of the fast decay estimate |u_j(x)| <= C phi~(|x - x_j| / q).
struct FastDecayPair {
  double log_c = 0.0;
  double c = 0.0;  ///< exp(log_c), possibly inf
  WeightSpec phi_tilde;
};

FastDecayPair fast_decay_pair(const TheoryConstants& tc, const WeightSpec& weights, Method method, double c_qu,
                              double gamma, double c_gamma);

/// 3^d C sum (n+1)^(d-1) phi~(n), the theoretical Lebesgue bound.
StabilityBound theoretical_lebesgue_bound(const FastDecayPair& pair, int dim);

}  // namespace fdpr
