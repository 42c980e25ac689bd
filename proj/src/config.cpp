#include "fdpr/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  while (true) {
    const auto cut = s.find(sep);
    parts.push_back(trim(s.substr(0, cut)));
    if (cut == std::string_view::npos) return parts;
    s.remove_prefix(cut + 1);
  }
}

template <class T>
T number(const std::string& key, const std::string& text, int line) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(key + ": cannot parse '" + text + "' as a number", line);
  return v;
}

double positive(const std::string& key, const std::string& text, int line) {
  const double v = number<double>(key, text, line);
  if (!(v > 0.0)) throw ConfigError(key + " must be positive", line);
  return v;
}

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

DeltaMode parse_delta_mode(const std::string& text, int line) {
  if (text == "fill") return DeltaMode::fill;
  if (text == "separation") return DeltaMode::separation;
  if (text == "diameter") return DeltaMode::diameter;
  throw ConfigError("delta_mode must be fill, separation or diameter, got '" + text + "'", line);
}

}  // namespace

std::string to_string(DeltaMode m) {
  switch (m) {
    case DeltaMode::fill: return "fill";
    case DeltaMode::separation: return "separation";
    case DeltaMode::diameter: return "diameter";
  }
  return "?";
}

std::string to_string(BasisFamily f) { return f == BasisFamily::monomial ? "monomial" : "chebyshev"; }

EngineConfig ExperimentConfig::engine_config() const {
  EngineConfig e;
  e.kind = engine;
  e.degree = degree;
  e.family = family;
  e.weight = weight;
  e.delta = {delta_mode, delta_factor};
  return e;
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value, int line) {
  try {
    if (key == "command") {
      if (value != "basis" && value != "converge" && value != "lebesgue" && value != "theory")
        throw ConfigError("command must be basis, converge, lebesgue or theory", line);
      c.command = value;
    } else if (key == "domain") {
      std::vector<double> lo, hi;
      for (const auto& axis : split(value, ',')) {
        const auto ends = split(axis, ':');
        if (ends.size() != 2) throw ConfigError("domain axis '" + axis + "' is not lo:hi", line);
        lo.push_back(number<double>(key, ends[0], line));
        hi.push_back(number<double>(key, ends[1], line));
        if (!(lo.back() < hi.back())) throw ConfigError("domain axis '" + axis + "' has lo >= hi", line);
      }
      c.lower = std::move(lo);
      c.upper = std::move(hi);
    } else if (key == "nodes") {
      std::vector<int> counts;
      for (const auto& s : split(value, ',')) {
        counts.push_back(number<int>(key, s, line));
        if (counts.back() < 1) throw ConfigError("nodes entries must be positive", line);
      }
      c.nodes = std::move(counts);
    } else if (key == "perturb") {
      c.perturb = number<double>(key, value, line);
      if (!(c.perturb >= 0.0 && c.perturb < 0.5)) throw ConfigError("perturb must lie in [0, 0.5)", line);
    } else if (key == "seed") {
      c.seed = number<std::uint64_t>(key, value, line);
    } else if (key == "degree") {
      c.degree = number<int>(key, value, line);
      if (c.degree < 0) throw ConfigError("degree must be nonnegative", line);
    } else if (key == "family") {
      if (value == "monomial") c.family = BasisFamily::monomial;
      else if (value == "chebyshev") c.family = BasisFamily::chebyshev;
      else throw ConfigError("family must be monomial or chebyshev", line);
    } else if (key == "weight") {
      c.weight = WeightSpec::parse(value);
    } else if (key == "delta_mode") {
      c.delta_mode = parse_delta_mode(value, line);
    } else if (key == "delta_factor") {
      c.delta_factor = positive(key, value, line);
    } else if (key == "engine") {
      c.engine = parse_engine_kind(value);
    } else if (key == "target") {
      make_target(value, value == "franke" ? 2 : 1);
      c.target = value;
    } else if (key == "grid") {
      c.grid = number<int>(key, value, line);
      if (c.grid < 0 || c.grid == 1) throw ConfigError("grid must be 0 (default) or at least 2", line);
    } else if (key == "out") {
      c.out = value;
    } else if (key == "theta") {
      c.theta = positive(key, value, line);
    } else if (key == "radius") {
      c.radius = positive(key, value, line);
    } else if (key == "c_qu") {
      c.c_qu = positive(key, value, line);
    } else if (key == "gamma") {
      c.gamma = positive(key, value, line);
    } else if (key == "c_gamma") {
      c.c_gamma = positive(key, value, line);
    } else if (key == "ell") {
      c.ell = number<int>(key, value, line);
      if (c.ell < 0) throw ConfigError("ell must be nonnegative", line);
    } else if (key == "stability_c") {
      c.stability_c = positive(key, value, line);
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(key + ": " + e.what(), line);
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(std::string_view(raw).substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    set_config_value(c, key, trim(std::string_view(text).substr(eq + 1)), line);
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream os;
  auto join = [](const auto& v, auto&& f) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + f(i);
    return s;
  };
  if (!c.command.empty()) os << "command = " << c.command << '\n';
  os << "domain = " << join(c.lower, [&](std::size_t i) { return fmt(c.lower[i]) + ":" + fmt(c.upper[i]); }) << '\n';
  os << "nodes = " << join(c.nodes, [&](std::size_t i) { return std::to_string(c.nodes[i]); }) << '\n';
  os << "perturb = " << fmt(c.perturb) << '\n';
  os << "seed = " << c.seed << '\n';
  os << "degree = " << c.degree << '\n';
  os << "family = " << to_string(c.family) << '\n';
  os << "weight = " << c.weight.to_string() << '\n';
  os << "delta_mode = " << to_string(c.delta_mode) << '\n';
  os << "delta_factor = " << fmt(c.delta_factor) << '\n';
  os << "engine = " << to_string(c.engine) << '\n';
  os << "target = " << c.target << '\n';
  os << "grid = " << c.grid << '\n';
  if (!c.out.empty()) os << "out = " << c.out << '\n';
  os << "theta = " << fmt(c.theta) << '\n';
  os << "radius = " << fmt(c.radius) << '\n';
  os << "c_qu = " << fmt(c.c_qu) << '\n';
  os << "gamma = " << fmt(c.gamma) << '\n';
  os << "c_gamma = " << fmt(c.c_gamma) << '\n';
  os << "ell = " << c.ell << '\n';
  os << "stability_c = " << fmt(c.stability_c) << '\n';
  return os.str();
}

void validate(const ExperimentConfig& c) {
  if (c.command.empty()) throw ConfigError("no command given");
  if (c.lower.size() != c.upper.size() || c.lower.empty()) throw ConfigError("domain is empty");
  if (c.nodes.empty()) throw ConfigError("nodes list is empty");
  if (c.command == "converge" && c.nodes.size() < 3) throw ConfigError("converge needs at least three node counts");
  try {
    make_target(c.target, c.dim());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("target: ") + e.what());
  }
  if (c.engine == EngineKind::shepard && c.degree != 0) throw ConfigError("shepard engine requires degree = 0");
  const Admissibility a = admissibility_report(c.weight, c.dim(), c.degree, method_of(c.engine));
  if (!a.admissible)
    throw AdmissibilityError("weight " + c.weight.to_string() + " is not admissible for " + to_string(c.engine) +
                             " with d = " + std::to_string(c.dim()) + ", m = " + std::to_string(c.degree) +
                             " (margin " + fmt(a.margin) + ")");
}

}  // namespace fdpr
