#include "fdpr/weights.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

double parse_positive(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || !(v > 0.0) || !std::isfinite(v))
    throw InvalidArgument("weight parameter " + std::string(key) + " must be a positive number, got '" +
                          std::string(value) + "'");
  return v;
}

}  // namespace

WeightSpec WeightSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("weight spec needs 'family:param=value'");
  const auto family = text.substr(0, colon);
  WeightSpec spec;
  std::string_view expected_key;
  if (family == "gaussian") {
    spec = gaussian(1.0);
    expected_key = "nu";
  } else if (family == "exponential") {
    spec = exponential(1.0);
    expected_key = "nu";
  } else if (family == "algebraic") {
    spec = algebraic(1.0);
    expected_key = "k";
  } else {
    throw InvalidArgument("unknown weight family '" + std::string(family) + "'");
  }

  bool have_shape = false;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("weight parameter '" + std::string(item) + "' lacks '='");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == expected_key) {
      spec.shape = parse_positive(key, value);
      have_shape = true;
    } else if (key == "scale") {
      if (value == "delta") spec.scale_source = ScaleSource::delta;
      else if (value == "separation") spec.scale_source = ScaleSource::separation;
      else throw InvalidArgument("weight scale must be 'delta' or 'separation'");
    } else {
      throw InvalidArgument("unknown weight parameter '" + std::string(key) + "' for " + std::string(family));
    }
  }
  if (!have_shape) throw InvalidArgument("weight spec missing '" + std::string(expected_key) + "='");
  return spec;
}

std::string WeightSpec::to_string() const {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, shape);
  return fdpr::to_string(family) + ':' + (family == WeightFamily::algebraic ? "k=" : "nu=") + std::string(buf, ptr) +
         ",scale=" + (scale_source == ScaleSource::delta ? "delta" : "separation");
}

double phi(const WeightSpec& spec, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("phi argument must be nonnegative");
  switch (spec.family) {
    case WeightFamily::gaussian: return std::exp(-spec.shape * t * t);
    case WeightFamily::exponential: return std::exp(-spec.shape * t);
    case WeightFamily::algebraic:
      if (t == 0.0) throw DivergentAtZero("algebraic weight diverges at zero distance");
      return std::pow(t, -spec.shape);
  }
  return 0.0;
}

double log_phi(const WeightSpec& spec, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("phi argument must be nonnegative");
  switch (spec.family) {
    case WeightFamily::gaussian: return -spec.shape * t * t;
    case WeightFamily::exponential: return -spec.shape * t;
    case WeightFamily::algebraic:
      if (t == 0.0) throw DivergentAtZero("algebraic weight diverges at zero distance");
      return -spec.shape * std::log(t);
  }
  return 0.0;
}

double eval_weight(const WeightSpec& spec, const Point& x, const Point& y, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("weight scale must be positive");
  return std::max(phi(spec, (x - y).norm() / scale), kWeightFloor);
}

Admissibility admissibility_report(const WeightSpec& spec, int dim, int degree, Method method) {
  if (spec.family != WeightFamily::algebraic) return {true, std::numeric_limits<double>::infinity()};
  const double k = method == Method::mls ? spec.shape / 2.0 : spec.shape;
  const double lhs = dim + degree - k;
  return {lhs < -1.0, -1.0 - lhs};
}

std::string to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::gaussian: return "gaussian";
    case WeightFamily::exponential: return "exponential";
    case WeightFamily::algebraic: return "algebraic";
  }
  return "?";
}

std::string to_string(Method m) { return m == Method::mls ? "mls" : "one-norm"; }

}  // namespace fdpr
