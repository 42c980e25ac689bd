#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fdpr {

using Point = Eigen::VectorXd;
/// Row i holds node i; one column per coordinate.
using PointMatrix = Eigen::MatrixXd;

/// Axis-aligned box [lower, upper] in R^d.
class Domain {
 public:
  Domain(std::vector<double> lower, std::vector<double> upper);

  /// The box [lo, hi]^dim.
  static Domain cube(int dim, double lo, double hi);

  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double width(int axis) const { return upper_[axis] - lower_[axis]; }
  double diameter() const;
  bool contains(const Point& x, double tol = 0.0) const;

  bool operator==(const Domain&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Scattered nodes in a box with their separation radius, fill distance and
/// quasi-uniformity ratio computed once at construction.
class NodeSet {
 public:
  /// `grid_counts` records the tensor layout when the points came from
  /// generate_grid (needed by perturb and the default probe resolution).
  NodeSet(Domain domain, PointMatrix points, std::optional<std::vector<int>> grid_counts = std::nullopt);

  const Domain& domain() const noexcept { return domain_; }
  const PointMatrix& points() const noexcept { return points_; }
  Point point(Eigen::Index i) const { return points_.row(i).transpose(); }
  Eigen::Index size() const noexcept { return points_.rows(); }
  int dim() const noexcept { return domain_.dim(); }
  const std::optional<std::vector<int>>& grid_counts() const noexcept { return grid_counts_; }

  double separation_radius() const noexcept { return q_; }
  double fill_distance() const noexcept { return h_; }
  double quasi_uniformity() const noexcept { return h_ / q_; }

 private:
  Domain domain_;
  PointMatrix points_;
  std::optional<std::vector<int>> grid_counts_;
  double q_ = 0.0;
  double h_ = 0.0;
};

enum class DeltaMode {
  fill,        ///< delta = c * h
  separation,  ///< delta = c * q
  diameter,    ///< delta = c * 2h, the diameter of the largest empty ball (cell diagonal on grids)
};

struct DeltaRule {
  DeltaMode mode = DeltaMode::fill;
  double factor = 5.0;
};

/// Tensor-product equispaced nodes including the box corners.
NodeSet generate_grid(const Domain& domain, std::span<const int> counts_per_axis);

/// Shifts every interior coordinate of a grid set by U(-f, f) * spacing.
/// Coordinates on the box boundary stay put. Deterministic in `seed`.
NodeSet perturb(const NodeSet& nodes, double fraction, std::uint64_t seed);

/// Half the minimum pairwise distance. Needs at least two points.
double separation_radius(const PointMatrix& points);
double separation_radius(const NodeSet& nodes);

/// Default probe resolution: 8 probe intervals per node interval, so the probe
/// grid contains every cell centre of a tensor node grid.
int default_probe_resolution(const NodeSet& nodes);

/// Largest nearest-node distance over a probe grid with `probe_resolution`
/// intervals per axis. Nested probe grids give nondecreasing estimates.
double fill_distance(const NodeSet& nodes, int probe_resolution);
double fill_distance(const Domain& domain, const PointMatrix& points, int probe_resolution);

double quasi_uniformity(const NodeSet& nodes);

double scale_delta(const DeltaRule& rule, const NodeSet& nodes);

/// CSV with header x0,...,x{d-1}; one row per node.
void write_csv(std::ostream& out, const NodeSet& nodes);
NodeSet read_csv(std::istream& in, const Domain& domain);

}  // namespace fdpr
