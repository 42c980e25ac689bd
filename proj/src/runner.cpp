#include "fdpr/runner.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_metadata(std::ostream& os, const ExperimentConfig& config) {
  std::istringstream in(serialize(config));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    os << "# " << line.substr(0, eq) << '=' << line.substr(eq + 3) << '\n';
  }
}

void write_levels(std::ostream& os, const std::vector<ConvergenceLevel>& levels) {
  os << "N,h,q,delta,sup_error,lebesgue,slope_running\n";
  for (const auto& l : levels)
    os << l.nodes << ',' << num(l.h) << ',' << num(l.q) << ',' << num(l.delta) << ',' << num(l.sup_error) << ','
       << num(l.lebesgue) << ',' << num(l.slope_running) << '\n';
}

}  // namespace

NodeSet build_nodes(const ExperimentConfig& config, int per_axis) {
  const std::vector<int> counts(static_cast<std::size_t>(config.dim()), per_axis);
  NodeSet nodes = generate_grid(config.domain(), counts);
  if (config.perturb > 0.0) return perturb(nodes, config.perturb, config.seed);
  return nodes;
}

EvalGrid build_eval_grid(const ExperimentConfig& config) {
  if (config.grid == 0) return default_eval_grid(config.domain());
  const std::vector<int> counts(static_cast<std::size_t>(config.dim()), config.grid);
  return uniform_grid(config.domain(), counts);
}

std::string run_basis_dump(const ExperimentConfig& config) {
  validate(config);
  const NodeSet nodes = build_nodes(config, config.nodes.front());
  const auto engine = make_engine(config.engine_config(), nodes);
  const EvalGrid grid = build_eval_grid(config);
  const bool lp = method_of(config.engine) == Method::one_norm;

  std::ostringstream os;
  write_metadata(os, config);
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    os << "# node" << j << '=';
    for (int a = 0; a < nodes.dim(); ++a) os << (a ? ";" : "") << num(nodes.points()(j, a));
    os << '\n';
  }
  for (int a = 0; a < nodes.dim(); ++a) os << (a ? "," : "") << 'x' << a;
  for (Eigen::Index j = 0; j < nodes.size(); ++j) os << ",a" << j;
  if (lp) os << ",nonzeros";
  os << '\n';
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.points.row(i).transpose();
    const CoefficientVector c = engine->coefficients(x);
    const Eigen::VectorXd a = c.to_dense();
    for (int k = 0; k < nodes.dim(); ++k) os << (k ? "," : "") << num(x[k]);
    for (Eigen::Index j = 0; j < a.size(); ++j) os << ',' << num(a[j]);
    if (lp) os << ',' << (a.array() != 0.0).count();
    os << '\n';
  }
  return os.str();
}

std::string run_convergence(const ExperimentConfig& config) {
  validate(config);
  std::vector<NodeSet> sets;
  for (int n : config.nodes) sets.push_back(build_nodes(config, n));
  const TargetFunction f = make_target(config.target, config.dim());
  const ConvergenceReport r = convergence_study(config.engine_config(), f, sets, build_eval_grid(config));

  std::ostringstream os;
  write_metadata(os, config);
  os << "# target_order=" << r.target_order << '\n';
  os << "# slope=" << (r.slope ? num(*r.slope) : "undefined") << '\n';
  os << "# endpoint_slope=" << (r.endpoint_slope ? num(*r.endpoint_slope) : "undefined") << '\n';
  os << "# certifiable=" << (r.certifiable ? "true" : "false") << '\n';
  write_levels(os, r.levels);
  return os.str();
}

std::string run_lebesgue(const ExperimentConfig& config) {
  validate(config);
  const EvalGrid grid = build_eval_grid(config);
  const EngineConfig ec = config.engine_config();
  std::vector<ConvergenceLevel> levels;
  bool certifiable = true;
  std::string failure;
  for (int n : config.nodes) {
    const NodeSet nodes = build_nodes(config, n);
    const auto engine = make_engine(ec, nodes);
    const ScanReport s = lebesgue_scan(*engine, grid);
    if (!s.certifiable() && certifiable) failure = s.first_failure;
    certifiable = certifiable && s.certifiable();
    ConvergenceLevel l;
    l.nodes = nodes.size();
    l.h = nodes.fill_distance();
    l.q = nodes.separation_radius();
    l.delta = weight_scale(ec, nodes);
    l.sup_error = std::numeric_limits<double>::quiet_NaN();
    l.lebesgue = s.lebesgue_constant;
    l.slope_running = std::numeric_limits<double>::quiet_NaN();
    levels.push_back(l);
  }
  std::ostringstream os;
  write_metadata(os, config);
  os << "# certifiable=" << (certifiable ? "true" : "false") << '\n';
  if (!certifiable) os << "# first_failure=" << failure << '\n';
  write_levels(os, levels);
  return os.str();
}

std::string run_theory(const ExperimentConfig& config) {
  validate(config);
  const TheoryConstants tc = theory_constants(config.theta, config.radius, config.degree);
  const Method method = method_of(config.engine);
  const FastDecayPair pair = fast_decay_pair(tc, config.weight, method, config.c_qu, config.gamma, config.c_gamma);
  const StabilityBound k = stability_bound(config.stability_c, config.weight, config.dim(), config.ell);
  const StabilityBound bound = theoretical_lebesgue_bound(pair, config.dim());

  std::ostringstream os;
  write_metadata(os, config);
  os << "method=" << to_string(method) << '\n';
  os << "C1=" << num(tc.c1) << '\n';
  os << "C2=" << num(tc.c2) << '\n';
  os << "h0=" << num(tc.h0) << '\n';
  os << "C=" << num(pair.c) << '\n';
  os << "log_C=" << num(pair.log_c) << '\n';
  os << "phi_tilde=" << pair.phi_tilde.to_string() << '\n';
  os << "K=" << num(k.k) << '\n';
  os << "K_terms=" << k.terms << '\n';
  os << "K_tail_bound=" << num(k.tail_bound) << '\n';
  os << "lebesgue_bound=" << num(bound.k) << '\n';
  os << "log_lebesgue_bound=" << num(bound.log_k) << '\n';
  return os.str();
}

std::string run(const ExperimentConfig& config) {
  if (config.command == "basis") return run_basis_dump(config);
  if (config.command == "converge") return run_convergence(config);
  if (config.command == "lebesgue") return run_lebesgue(config);
  if (config.command == "theory") return run_theory(config);
  throw ConfigError(config.command.empty() ? "no command given" : "unknown command '" + config.command + "'");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const UnsupportedAngle*>(&e))
    return exit_config;
  if (dynamic_cast<const AdmissibilityError*>(&e) || dynamic_cast<const DivergentSeries*>(&e))
    return exit_admissibility;
  return exit_numerical;
}

}  // namespace fdpr
