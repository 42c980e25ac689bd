#pragma once

#include <stdexcept>
#include <string>

namespace fdpr {

/// Bad caller input: empty grids, out-of-range fractions, malformed specs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear system or simplex basis became numerically singular.
class IllConditioned : public std::runtime_error {
 public:
  IllConditioned(const std::string& what, double smallest_pivot)
      : std::runtime_error(what + " (smallest pivot " + std::to_string(smallest_pivot) + ")"),
        smallest_pivot_(smallest_pivot) {}
  double smallest_pivot() const noexcept { return smallest_pivot_; }

 private:
  double smallest_pivot_;
};

/// Weight profile evaluated at zero for a family that blows up there.
class DivergentAtZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Stability series does not converge for the requested profile/exponent.
class DivergentSeries : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Closed-form cone constants are only known for angles up to pi/5.
class UnsupportedAngle : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The LP could not be set up or solved (infeasible restricted problem, cycling, ...).
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fdpr
