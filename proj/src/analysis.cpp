#include "fdpr/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

constexpr Eigen::Index kChunk = 128;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument("not a number: '" + std::string(s) + "'");
  return v;
}

}  // namespace

EvalGrid uniform_grid(const Domain& domain, std::span<const int> counts) {
  const int d = domain.dim();
  if (static_cast<int>(counts.size()) != d) throw InvalidArgument("grid counts must match the domain dimension");
  Eigen::Index total = 1;
  for (int c : counts) {
    if (c < 1) throw InvalidArgument("grid counts must be positive");
    total *= c;
  }
  EvalGrid g;
  g.counts.assign(counts.begin(), counts.end());
  g.points.resize(total, d);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (Eigen::Index r = 0; r < total; ++r) {
    for (int a = 0; a < d; ++a) {
      const int n = counts[static_cast<std::size_t>(a)];
      const double lo = domain.lower()[static_cast<std::size_t>(a)];
      g.points(r, a) = n == 1 ? lo + 0.5 * domain.width(a) : lo + domain.width(a) * idx[static_cast<std::size_t>(a)] / (n - 1);
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < counts[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
  return g;
}

EvalGrid default_eval_grid(const Domain& domain) {
  std::vector<int> counts(static_cast<std::size_t>(domain.dim()), domain.dim() == 1 ? 2001 : 101);
  return uniform_grid(domain, counts);
}

double franke(double x, double y) {
  return 0.75 * std::exp(-((9 * x - 2) * (9 * x - 2) + (9 * y - 2) * (9 * y - 2)) / 4) +
         0.75 * std::exp(-(9 * x + 1) * (9 * x + 1) / 49 - (9 * y + 1) / 10) +
         0.5 * std::exp(-((9 * x - 7) * (9 * x - 7) + (9 * y - 3) * (9 * y - 3)) / 4) -
         0.2 * std::exp(-(9 * x - 4) * (9 * x - 4) - (9 * y - 7) * (9 * y - 7));
}

TargetFunction make_target(std::string_view spec, int dim) {
  if (dim < 1) throw InvalidArgument("target dimension must be positive");
  if (spec == "sin-pi")
    return {"sin-pi", [](const Point& x) {
              double v = 1.0;
              for (Eigen::Index i = 0; i < x.size(); ++i) v *= std::sin(std::numbers::pi * x[i]);
              return v;
            }};
  if (spec == "franke") {
    if (dim != 2) throw InvalidArgument("franke target needs dim = 2");
    return {"franke", [](const Point& x) { return franke(x[0], x[1]); }};
  }
  constexpr std::string_view prefix = "polynomial:";
  if (spec.starts_with(prefix)) {
    std::vector<double> coeffs;
    std::string_view rest = spec.substr(prefix.size());
    while (true) {
      const auto cut = rest.find(';');
      coeffs.push_back(parse_double(rest.substr(0, cut)));
      if (cut == std::string_view::npos) break;
      rest.remove_prefix(cut + 1);
    }
    int m = 0;
    while (dimension(m, dim) < static_cast<Eigen::Index>(coeffs.size())) ++m;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dimension(m, dim));
    for (std::size_t i = 0; i < coeffs.size(); ++i) c[static_cast<Eigen::Index>(i)] = coeffs[i];
    BasisSpec basis(m, dim);
    return {std::string(spec), [basis, c](const Point& x) { return basis.eval(x).dot(c); }};
  }
  throw InvalidArgument("unknown target '" + std::string(spec) + "' (sin-pi, franke, polynomial:<coeffs>)");
}

Eigen::VectorXd sample(const TargetFunction& f, const NodeSet& nodes) {
  Eigen::VectorXd v(nodes.size());
  for (Eigen::Index j = 0; j < nodes.size(); ++j) v[j] = f(nodes.point(j));
  return v;
}

EngineKind parse_engine_kind(std::string_view text) {
  if (text == "mls") return EngineKind::mls;
  if (text == "shepard") return EngineKind::shepard;
  if (text == "l1-cold") return EngineKind::l1_cold;
  if (text == "l1-warm") return EngineKind::l1_warm;
  if (text == "l1-colgen") return EngineKind::l1_colgen;
  throw InvalidArgument("unknown engine '" + std::string(text) + "' (mls, shepard, l1-cold, l1-warm, l1-colgen)");
}

std::string to_string(EngineKind k) {
  switch (k) {
    case EngineKind::mls: return "mls";
    case EngineKind::shepard: return "shepard";
    case EngineKind::l1_cold: return "l1-cold";
    case EngineKind::l1_warm: return "l1-warm";
    case EngineKind::l1_colgen: return "l1-colgen";
  }
  return "?";
}

Method method_of(EngineKind k) {
  return k == EngineKind::mls || k == EngineKind::shepard ? Method::mls : Method::one_norm;
}

double weight_scale(const EngineConfig& config, const NodeSet& nodes) {
  if (config.weight.scale_source == ScaleSource::separation) return nodes.separation_radius();
  return scale_delta(config.delta, nodes);
}

std::unique_ptr<QuasiInterpolant> make_engine(const EngineConfig& config, const NodeSet& nodes) {
  std::optional<Domain> box;
  if (config.family == BasisFamily::chebyshev) box = nodes.domain();
  BasisSpec basis(config.degree, nodes.dim(), config.family, box);
  const double scale = weight_scale(config, nodes);
  switch (config.kind) {
    case EngineKind::mls: return std::make_unique<MlsEngine>(MlsProblem(nodes, basis, config.weight, scale));
    case EngineKind::shepard:
      if (config.degree != 0) throw InvalidArgument("shepard engine requires degree 0");
      return std::make_unique<ShepardEngine>(MlsProblem(nodes, basis, config.weight, scale));
    case EngineKind::l1_cold:
      return std::make_unique<LpEngine>(LpContext(nodes, basis, config.weight, scale), LpStrategy::cold);
    case EngineKind::l1_warm:
      return std::make_unique<LpEngine>(LpContext(nodes, basis, config.weight, scale), LpStrategy::warm);
    case EngineKind::l1_colgen:
      return std::make_unique<LpEngine>(LpContext(nodes, basis, config.weight, scale),
                                        LpStrategy::column_generation);
  }
  throw InvalidArgument("unknown engine kind");
}

int worker_count() {
  if (const char* env = std::getenv("FDPR_THREADS")) {
    int n = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && ptr == s.data() + s.size() && n >= 1) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ScanReport scan(const QuasiInterpolant& engine, const EvalGrid& grid, const TargetFunction* target,
                const Eigen::VectorXd* samples, int workers) {
  const bool with_error = target && samples;
  const Eigen::Index n = grid.size();
  const Eigen::Index chunks = (n + kChunk - 1) / kChunk;
  ScanReport report;
  report.lebesgue = Eigen::VectorXd::Constant(n, kNaN);
  if (with_error) report.error = Eigen::VectorXd::Constant(n, kNaN);

  struct ChunkResult {
    Eigen::Index failures = 0;
    Eigen::Index first_index = -1;
    std::string first_failure;
    long iterations = 0;
  };
  std::vector<ChunkResult> results(static_cast<std::size_t>(chunks));
  std::atomic<Eigen::Index> next{0};

  auto work = [&] {
    while (true) {
      const Eigen::Index c = next.fetch_add(1);
      if (c >= chunks) return;
      auto local = engine.clone();
      ChunkResult& res = results[static_cast<std::size_t>(c)];
      const Eigen::Index end = std::min(n, (c + 1) * kChunk);
      for (Eigen::Index i = c * kChunk; i < end; ++i) {
        const Point x = grid.points.row(i).transpose();
        try {
          const CoefficientVector a = local->coefficients(x);
          report.lebesgue[i] = a.abs_sum();
          if (with_error) report.error[i] = std::abs((*target)(x) - a.dot(*samples));
        } catch (const std::exception& e) {
          if (res.failures++ == 0) {
            res.first_index = i;
            res.first_failure = e.what();
          }
        }
      }
      if (auto* lp = dynamic_cast<LpEngine*>(local.get())) res.iterations = lp->total_iterations();
    }
  };

  const int w = static_cast<int>(std::min<Eigen::Index>(workers > 0 ? workers : worker_count(), chunks));
  if (w <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < w; ++t) pool.emplace_back(work);
  }

  for (const auto& r : results) {
    if (r.failures && report.failures == 0)
      report.first_failure = "point " + std::to_string(r.first_index) + ": " + r.first_failure;
    report.failures += r.failures;
    report.iterations += r.iterations;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isnan(report.lebesgue[i])) report.lebesgue_constant = std::max(report.lebesgue_constant, report.lebesgue[i]);
    if (with_error && !std::isnan(report.error[i])) report.sup_error = std::max(report.sup_error, report.error[i]);
  }
  return report;
}

ScanReport lebesgue_scan(const QuasiInterpolant& engine, const EvalGrid& grid, int workers) {
  return scan(engine, grid, nullptr, nullptr, workers);
}

double sup_error(const QuasiInterpolant& engine, const TargetFunction& f, const Eigen::VectorXd& samples,
                 const EvalGrid& grid, int workers) {
  const ScanReport r = scan(engine, grid, &f, &samples, workers);
  if (!r.certifiable()) throw SolverFailure("sup error scan failed at " + r.first_failure);
  return r.sup_error;
}

double moment_bound(const QuasiInterpolant& engine, const EvalGrid& grid, int ell) {
  auto local = engine.clone();
  const auto& nodes = local->nodes();
  double best = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const CoefficientVector a = local->coefficients(grid.points.row(i).transpose());
    best = std::max(best, a.weighted_moment(nodes.points(), ell, nodes.separation_radius()));
  }
  return best;
}

double reproduction_residual(const QuasiInterpolant& engine, const PointMatrix& points, int trials,
                             std::uint64_t seed) {
  auto local = engine.clone();
  const auto& nodes = local->nodes();
  const BasisSpec mono(local->degree(), nodes.dim());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd coeffs(mono.size(), trials);
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs.data()[k] = u(rng);
  const Eigen::MatrixXd at_nodes = Vandermonde(mono, nodes.points()).matrix() * coeffs;

  double worst = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Point x = points.row(i).transpose();
    const Eigen::VectorXd a = local->coefficients(x).to_dense();
    const Eigen::RowVectorXd exact = mono.eval(x).transpose() * coeffs;
    const Eigen::RowVectorXd approx = a.transpose() * at_nodes;
    worst = std::max(worst, (approx - exact).cwiseAbs().maxCoeff());
  }
  return worst;
}

double reproduction_residual(const QuasiInterpolant& engine, const EvalGrid& grid, int trials, std::uint64_t seed) {
  return reproduction_residual(engine, grid.points, trials, seed);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs at least two matching points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport convergence_study(const EngineConfig& config, const TargetFunction& f,
                                    const std::vector<NodeSet>& node_sets, const EvalGrid& grid, int workers) {
  ConvergenceReport report;
  report.target_order = config.degree + 1;
  std::vector<double> hs, errs;
  bool defined = node_sets.size() >= 2;
  for (const auto& nodes : node_sets) {
    const auto engine = make_engine(config, nodes);
    const Eigen::VectorXd samples = sample(f, nodes);
    const ScanReport s = scan(*engine, grid, &f, &samples, workers);
    report.certifiable = report.certifiable && s.certifiable();

    ConvergenceLevel level;
    level.nodes = nodes.size();
    level.h = nodes.fill_distance();
    level.q = nodes.separation_radius();
    level.delta = weight_scale(config, nodes);
    level.sup_error = s.sup_error;
    level.lebesgue = s.lebesgue_constant;
    level.slope_running = kNaN;
    if (!report.levels.empty()) {
      const auto& prev = report.levels.back();
      if (prev.sup_error > kNoiseFloor && level.sup_error > kNoiseFloor)
        level.slope_running = std::log(prev.sup_error / level.sup_error) / std::log(prev.h / level.h);
    }
    defined = defined && level.sup_error > kNoiseFloor;
    hs.push_back(level.h);
    errs.push_back(level.sup_error);
    report.levels.push_back(level);
  }
  if (defined) {
    report.slope = loglog_slope(hs, errs);
    report.endpoint_slope = std::log(errs.front() / errs.back()) / std::log(hs.front() / hs.back());
  }
  return report;
}

StabilityBound stability_bound_log(double log_c, const WeightSpec& weights, int dim, int ell) {
  if (dim < 1 || ell < 0) throw InvalidArgument("stability bound needs dim >= 1 and ell >= 0");
  if (!(weights.shape > 0.0)) throw DivergentSeries("weight shape must be positive for the series to converge");
  const double p = dim + ell - 1;
  StabilityBound out;

  if (weights.family == WeightFamily::algebraic) {
    const double k = weights.shape;
    if (!(dim + ell - k < -1.0))
      throw DivergentSeries("series diverges: d + ell - k = " + std::to_string(dim + ell - k) + " is not below -1");
    constexpr long budget = 1'000'000;
    double sum = 0.0;
    for (long n = budget; n >= 1; --n) sum += std::pow(n + 1.0, p) * std::pow(static_cast<double>(n), -k);
    sum += 1.0;  // n = 0 shell, phi(1)
    const double m = budget;
    out.series = sum;
    out.tail_bound = std::pow(1.0 + 1.0 / m, p) * std::pow(m, p - k + 1.0) / (k - p - 1.0);
    out.terms = budget + 1;
  } else {
    auto term = [&](long n) { return std::pow(n + 1.0, p) * std::exp(log_phi(weights, static_cast<double>(n))); };
    double sum = 0.0;
    long n = 0;
    double t = term(0);
    while (true) {
      sum += t;
      ++n;
      const double next = term(n);
      if (next == 0.0) break;
      const double ratio = term(n + 1) / next;
      if (ratio < 1.0 && next / (1.0 - ratio) < 1e-12 * sum) {
        out.tail_bound = next / (1.0 - ratio);
        break;
      }
      t = next;
      if (n > 100'000'000) throw DivergentSeries("stability series did not settle within 1e8 terms");
    }
    out.series = sum;
    out.terms = n;
  }
  const double total = weights.family == WeightFamily::algebraic ? out.series + out.tail_bound : out.series;
  out.log_k = dim * std::log(3.0) + log_c + std::log(total);
  out.k = std::exp(out.log_k);
  return out;
}

StabilityBound stability_bound(double c, const WeightSpec& weights, int dim, int ell) {
  if (!(c > 0.0)) throw InvalidArgument("stability constant C must be positive");
  StabilityBound out = stability_bound_log(std::log(c), weights, dim, ell);
  const double total = weights.family == WeightFamily::algebraic ? out.series + out.tail_bound : out.series;
  out.k = std::pow(3.0, dim) * c * total;
  return out;
}

TheoryConstants theory_constants(double theta, double radius, int degree) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) throw InvalidArgument("cone angle must lie in (0, pi/2)");
  if (!(radius > 0.0)) throw InvalidArgument("cone radius must be positive");
  if (degree < 1) throw InvalidArgument("closed-form constants need degree >= 1");
  if (theta > std::numbers::pi / 5 * (1.0 + 1e-14))
    throw UnsupportedAngle("closed-form constants need theta <= pi/5");
  TheoryConstants tc;
  tc.theta = theta;
  tc.radius = radius;
  tc.degree = degree;
  tc.c1 = 2.0;
  const double s = std::sin(theta);
  tc.c2 = 16.0 * (1.0 + s) * (1.0 + s) * degree * degree / (3.0 * s * s);
  tc.h0 = radius / tc.c2;
  return tc;
}

FastDecayPair fast_decay_pair(const TheoryConstants& tc, const WeightSpec& weights, Method method, double c_qu,
                              double gamma, double c_gamma) {
  if (!(c_qu > 0.0 && gamma > 0.0 && c_gamma > 0.0)) throw InvalidArgument("c_qu, gamma and c_gamma must be positive");
  const bool mls = method == Method::mls;
  const double nu = weights.shape;
  const double arg = tc.c2 / (gamma * c_gamma);
  const double log_c1 = std::log(tc.c1);
  FastDecayPair out;
  switch (weights.family) {
    case WeightFamily::gaussian:
      out.log_c = 1.0 + log_c1 + (mls ? 0.5 : 1.0) * nu * arg * arg;
      out.phi_tilde = WeightSpec::exponential((mls ? std::sqrt(nu / 2) : std::sqrt(nu)) / (c_gamma * c_qu));
      break;
    case WeightFamily::exponential:
      out.log_c = log_c1 + (mls ? 0.5 : 1.0) * nu * arg;
      out.phi_tilde = WeightSpec::exponential((mls ? nu / 2 : nu) / (c_gamma * c_qu));
      break;
    case WeightFamily::algebraic:
      out.log_c = log_c1 - (mls ? 0.5 : 1.0) * log_phi(weights, tc.c2 * c_qu);
      out.phi_tilde = WeightSpec::algebraic(mls ? nu / 2 : nu);
      break;
  }
  out.c = std::exp(out.log_c);
  return out;
}

StabilityBound theoretical_lebesgue_bound(const FastDecayPair& pair, int dim) {
  return stability_bound_log(pair.log_c, pair.phi_tilde, dim, 0);
}

}  // namespace fdpr
