#pragma once

#include <string>
#include <string_view>

#include "fdpr/node_geometry.hpp"

namespace fdpr {

enum class WeightFamily { gaussian, exponential, algebraic };
enum class ScaleSource { delta, separation };
enum class Method { mls, one_norm };

/// Smallest weight ever handed to an engine; reciprocals stay finite.
inline constexpr double kWeightFloor = 1e-300;

/// Decay profile phi plus where its length scale comes from.
///   gaussian     phi(t) = exp(-nu t^2)
///   exponential  phi(t) = exp(-nu t)
///   algebraic    phi(t) = t^-k      (diverges at 0)
struct WeightSpec {
  WeightFamily family = WeightFamily::gaussian;
  double shape = 1.0;  ///< nu, or k for the algebraic family
  ScaleSource scale_source = ScaleSource::delta;

  static WeightSpec gaussian(double nu, ScaleSource s = ScaleSource::delta) { return {WeightFamily::gaussian, nu, s}; }
  static WeightSpec exponential(double nu, ScaleSource s = ScaleSource::delta) {
    return {WeightFamily::exponential, nu, s};
  }
  static WeightSpec algebraic(double k, ScaleSource s = ScaleSource::separation) {
    return {WeightFamily::algebraic, k, s};
  }

  /// Parses `gaussian:nu=1`, `exponential:nu=0.5`, `algebraic:k=6.2`, with an
  /// optional `,scale=delta|separation` suffix. Throws InvalidArgument.
  static WeightSpec parse(std::string_view text);
  std::string to_string() const;

  bool divergent_at_zero() const noexcept { return family == WeightFamily::algebraic; }

  bool operator==(const WeightSpec&) const = default;
};

/// phi(t) without the floor. Throws DivergentAtZero for algebraic at t = 0.
double phi(const WeightSpec& spec, double t);

/// log phi(t); finite wherever phi is, used to normalise weight vectors.
double log_phi(const WeightSpec& spec, double t);

/// w(x, y) = max(phi(|x - y| / scale), kWeightFloor).
double eval_weight(const WeightSpec& spec, const Point& x, const Point& y, double scale);

struct Admissibility {
  bool admissible = true;
  double margin = 0.0;  ///< -1 - (d + m - k/2) for MLS, -1 - (d + m - k) for 1-norm; +inf for exp families
};

/// Gaussian and exponential profiles always pass the ratio test. Algebraic
/// profiles need d + m - k/2 < -1 (MLS) or d + m - k < -1 (1-norm).
Admissibility admissibility_report(const WeightSpec& spec, int dim, int degree, Method method);

std::string to_string(WeightFamily f);
std::string to_string(Method m);

}  // namespace fdpr
