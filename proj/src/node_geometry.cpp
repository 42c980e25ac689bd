#include "fdpr/node_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "fdpr/errors.hpp"

namespace fdpr {

namespace {

constexpr double kCoincidentTol = 1e-14;
constexpr int kPerturbAttempts = 64;

// Uniform on [0, 1) from the top 53 bits; stable across standard libraries.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool has_coincident(const PointMatrix& points, double tol) {
  const Eigen::Index n = points.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if ((points.row(i) - points.row(j)).norm() <= tol) return true;
  return false;
}

// Visits all points of a tensor grid with `intervals` subdivisions per axis.
template <typename Visit>
void for_each_probe(const Domain& domain, int intervals, Visit&& visit) {
  const int d = domain.dim();
  std::vector<int> idx(d, 0);
  Point x(d);
  while (true) {
    for (int a = 0; a < d; ++a)
      x[a] = domain.lower()[a] + domain.width(a) * static_cast<double>(idx[a]) / intervals;
    visit(x);
    int a = 0;
    while (a < d && ++idx[a] > intervals) idx[a++] = 0;
    if (a == d) break;
  }
}

}  // namespace

Domain::Domain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InvalidArgument("domain needs at least one dimension");
  if (lower_.size() != upper_.size()) throw InvalidArgument("domain corner dimensions differ");
  for (std::size_t i = 0; i < lower_.size(); ++i)
    if (!(lower_[i] < upper_[i]))
      throw InvalidArgument("domain lower corner must be below upper corner on axis " + std::to_string(i));
}

Domain Domain::cube(int dim, double lo, double hi) {
  if (dim < 1) throw InvalidArgument("domain needs at least one dimension");
  return Domain(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

double Domain::diameter() const {
  double s = 0.0;
  for (int a = 0; a < dim(); ++a) s += width(a) * width(a);
  return std::sqrt(s);
}

bool Domain::contains(const Point& x, double tol) const {
  if (x.size() != dim()) return false;
  for (int a = 0; a < dim(); ++a)
    if (x[a] < lower_[a] - tol || x[a] > upper_[a] + tol) return false;
  return true;
}

NodeSet::NodeSet(Domain domain, PointMatrix points, std::optional<std::vector<int>> grid_counts)
    : domain_(std::move(domain)), points_(std::move(points)), grid_counts_(std::move(grid_counts)) {
  if (points_.rows() < 1) throw InvalidArgument("node set is empty");
  if (points_.cols() != domain_.dim()) throw InvalidArgument("node dimension does not match domain");
  const double tol = 1e-12 * domain_.diameter();
  for (Eigen::Index i = 0; i < points_.rows(); ++i)
    if (!domain_.contains(points_.row(i).transpose(), tol))
      throw InvalidArgument("node " + std::to_string(i) + " lies outside the domain");
  if (points_.rows() >= 2) {
    q_ = fdpr::separation_radius(points_);
    if (q_ <= 0.5 * kCoincidentTol * domain_.diameter()) throw InvalidArgument("node set has coincident points");
  } else {
    q_ = std::numeric_limits<double>::infinity();
  }
  h_ = fdpr::fill_distance(domain_, points_, default_probe_resolution(*this));
}

NodeSet generate_grid(const Domain& domain, std::span<const int> counts) {
  const int d = domain.dim();
  if (static_cast<int>(counts.size()) != d) throw InvalidArgument("need one node count per axis");
  Eigen::Index total = 1;
  for (int c : counts) {
    if (c < 1) throw InvalidArgument("node count per axis must be positive");
    total *= c;
  }
  PointMatrix pts(total, d);
  std::vector<int> idx(d, 0);
  for (Eigen::Index row = 0; row < total; ++row) {
    for (int a = 0; a < d; ++a) {
      pts(row, a) = counts[a] == 1
                        ? 0.5 * (domain.lower()[a] + domain.upper()[a])
                        : domain.lower()[a] + domain.width(a) * static_cast<double>(idx[a]) / (counts[a] - 1);
    }
    // Last axis varies fastest so rows of a 2-D grid are x0-major.
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < counts[a]) break;
      idx[a] = 0;
    }
  }
  return NodeSet(domain, std::move(pts), std::vector<int>(counts.begin(), counts.end()));
}

NodeSet perturb(const NodeSet& nodes, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 0.5)) throw InvalidArgument("perturbation fraction must lie in [0, 0.5)");
  if (!nodes.grid_counts()) throw InvalidArgument("perturb expects a grid node set");
  const auto& counts = *nodes.grid_counts();
  const Domain& dom = nodes.domain();
  if (fraction == 0.0) return nodes;

  std::mt19937_64 rng(seed);
  const double tol = kCoincidentTol * dom.diameter();
  for (int attempt = 0; attempt < kPerturbAttempts; ++attempt) {
    PointMatrix pts = nodes.points();
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      for (int a = 0; a < dom.dim(); ++a) {
        if (counts[a] < 2) continue;
        const double spacing = dom.width(a) / (counts[a] - 1);
        const double v = pts(i, a);
        const bool on_boundary = std::abs(v - dom.lower()[a]) <= tol || std::abs(v - dom.upper()[a]) <= tol;
        const double u = unit_uniform(rng);
        if (on_boundary) continue;
        pts(i, a) = std::clamp(v + (2.0 * u - 1.0) * fraction * spacing, dom.lower()[a], dom.upper()[a]);
      }
    }
    if (!has_coincident(pts, tol)) return NodeSet(dom, std::move(pts));
  }
  throw InvalidArgument("perturbation kept producing coincident points");
}

double separation_radius(const PointMatrix& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw InvalidArgument("separation radius needs at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) best = std::min(best, (points.row(i) - points.row(j)).squaredNorm());
  return 0.5 * std::sqrt(best);
}

double separation_radius(const NodeSet& nodes) { return separation_radius(nodes.points()); }

int default_probe_resolution(const NodeSet& nodes) {
  int per_axis = 0;
  if (nodes.grid_counts()) {
    for (int c : *nodes.grid_counts()) per_axis = std::max(per_axis, c);
  } else {
    per_axis = static_cast<int>(std::ceil(std::pow(static_cast<double>(nodes.size()), 1.0 / nodes.dim()) - 1e-9));
  }
  return 8 * std::max(per_axis - 1, 1);
}

double fill_distance(const Domain& domain, const PointMatrix& points, int probe_resolution) {
  if (probe_resolution < 1) throw InvalidArgument("probe resolution must be positive");
  double worst = 0.0;
  for_each_probe(domain, probe_resolution, [&](const Point& x) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < points.rows(); ++j) {
      nearest = std::min(nearest, (points.row(j).transpose() - x).squaredNorm());
      if (nearest <= worst) break;
    }
    worst = std::max(worst, nearest);
  });
  return std::sqrt(worst);
}

double fill_distance(const NodeSet& nodes, int probe_resolution) {
  return fill_distance(nodes.domain(), nodes.points(), probe_resolution);
}

double quasi_uniformity(const NodeSet& nodes) { return nodes.quasi_uniformity(); }

double scale_delta(const DeltaRule& rule, const NodeSet& nodes) {
  if (!(rule.factor > 0.0)) throw InvalidArgument("delta factor must be positive");
  switch (rule.mode) {
    case DeltaMode::fill: return rule.factor * nodes.fill_distance();
    case DeltaMode::separation: return rule.factor * nodes.separation_radius();
    case DeltaMode::diameter: return rule.factor * 2.0 * nodes.fill_distance();
  }
  return 0.0;
}

void write_csv(std::ostream& out, const NodeSet& nodes) {
  const int d = nodes.dim();
  for (int a = 0; a < d; ++a) out << (a ? "," : "") << 'x' << a;
  out << '\n';
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < nodes.size(); ++i) {
    for (int a = 0; a < d; ++a) out << (a ? "," : "") << nodes.points()(i, a);
    out << '\n';
  }
  out.precision(old);
}

NodeSet read_csv(std::istream& in, const Domain& domain) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("node CSV is empty");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidArgument("node CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (static_cast<int>(row.size()) != domain.dim())
      throw InvalidArgument("node CSV line " + std::to_string(lineno) + ": expected " +
                            std::to_string(domain.dim()) + " columns");
    rows.push_back(std::move(row));
  }
  PointMatrix pts(static_cast<Eigen::Index>(rows.size()), domain.dim());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int a = 0; a < domain.dim(); ++a) pts(static_cast<Eigen::Index>(i), a) = rows[i][a];
  return NodeSet(domain, std::move(pts));
}

}  // namespace fdpr
