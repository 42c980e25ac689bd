#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdpr/analysis.hpp"

namespace fdpr {

/// Malformed or inconsistent experiment configuration. `line` is 0 when the
/// problem is not tied to a line of a config file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// The engine/weight/degree combination fails the admissibility test.
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat experiment description. Text form is one `key = value` per line;
/// `#` starts a comment.
///
///   command      basis | converge | lebesgue | theory
///   domain       lo:hi per axis, comma separated ("0:1,0:1")
///   nodes        nodes per axis for each refinement level ("8,16,32")
///   perturb      jitter fraction in [0, 0.5); seed
///   degree       polynomial degree m; family  monomial | chebyshev
///   weight       e.g. gaussian:nu=1, algebraic:k=6.2
///   delta_mode   fill | separation | diameter; delta_factor
///   engine       mls | shepard | l1-cold | l1-warm | l1-colgen
///   target       sin-pi | franke | polynomial:c0;c1;...
///   grid         evaluation points per axis, 0 for the default
///   out          output path, empty or "-" for stdout
///   theta, radius, c_qu, gamma, c_gamma, ell, stability_c   (theory)
struct ExperimentConfig {
  std::string command;
  std::vector<double> lower{-1.0};
  std::vector<double> upper{1.0};
  std::vector<int> nodes{8, 16, 32, 64};
  double perturb = 0.0;
  std::uint64_t seed = 7;
  int degree = 1;
  BasisFamily family = BasisFamily::chebyshev;
  WeightSpec weight = WeightSpec::gaussian(1.0);
  DeltaMode delta_mode = DeltaMode::fill;
  double delta_factor = 5.0;
  EngineKind engine = EngineKind::mls;
  std::string target = "sin-pi";
  int grid = 0;
  std::string out;
  double theta = 0.6283185307179586;
  double radius = 1.0;
  double c_qu = 1.0;
  double gamma = 0.5;
  double c_gamma = 1.0;
  int ell = 0;
  double stability_c = 1.0;

  int dim() const noexcept { return static_cast<int>(lower.size()); }
  Domain domain() const { return Domain(lower, upper); }
  EngineConfig engine_config() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Applies one key. Throws ConfigError (carrying `line`) on unknown keys or bad values.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value, int line = 0);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Every key in a fixed order; parse_config_text(serialize(c)) == c.
std::string serialize(const ExperimentConfig& config);

/// Cross-field checks; throws ConfigError or AdmissibilityError.
void validate(const ExperimentConfig& config);

std::string to_string(DeltaMode m);
std::string to_string(BasisFamily f);

}  // namespace fdpr
