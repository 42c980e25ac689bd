#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fdpr/errors.hpp"
#include "fdpr/runner.hpp"

namespace py = pybind11;
using namespace fdpr;

namespace {

Domain make_domain(const std::vector<double>& lower, const std::vector<double>& upper) {
  if (lower.size() != upper.size()) throw InvalidArgument("lower and upper must have the same length");
  return Domain(lower, upper);
}

Method parse_method(const std::string& s) {
  if (s == "mls") return Method::mls;
  if (s == "l1" || s == "one-norm") return Method::one_norm;
  throw InvalidArgument("method must be 'mls' or 'l1'");
}

class Engine {
 public:
  Engine(const NodeSet& nodes, const std::string& kind, int degree, const std::string& weight,
         const std::string& delta_mode, double delta_factor, const std::string& family) {
    ExperimentConfig c;
    set_config_value(c, "engine", kind);
    set_config_value(c, "degree", std::to_string(degree));
    set_config_value(c, "weight", weight);
    set_config_value(c, "delta_mode", delta_mode);
    c.delta_factor = delta_factor;
    set_config_value(c, "family", family);
    config_ = c.engine_config();
    impl_ = make_engine(config_, nodes);
  }

  Eigen::VectorXd coefficients(const Point& x) { return impl_->coefficients(x).to_dense(); }

  Eigen::VectorXd approximate(const Eigen::VectorXd& samples, const PointMatrix& points) {
    if (samples.size() != impl_->nodes().size()) throw InvalidArgument("one sample per node expected");
    Eigen::VectorXd out(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) out[i] = impl_->coefficients(points.row(i).transpose()).dot(samples);
    return out;
  }

  Eigen::VectorXd lebesgue(const PointMatrix& points) const {
    EvalGrid grid{points, {static_cast<int>(points.rows())}};
    return lebesgue_scan(*impl_, grid).lebesgue;
  }

  double reproduction(const PointMatrix& points, int trials, std::uint64_t seed) const {
    return reproduction_residual(*impl_, points, trials, seed);
  }

  double scale() const { return weight_scale(config_, impl_->nodes()); }
  const NodeSet& nodes() const { return impl_->nodes(); }
  std::string name() const { return to_string(config_.kind); }
  int degree() const { return config_.degree; }

 private:
  EngineConfig config_;
  std::unique_ptr<QuasiInterpolant> impl_;
};

py::dict stability_dict(const StabilityBound& b) {
  py::dict d;
  d["K"] = b.k;
  d["log_K"] = b.log_k;
  d["series"] = b.series;
  d["tail_bound"] = b.tail_bound;
  d["terms"] = b.terms;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fast-decaying polynomial reproduction: MLS and weighted 1-norm quasi-interpolants";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", PyExc_ValueError);
  py::register_exception<DivergentSeries>(m, "DivergentSeries", PyExc_ArithmeticError);
  py::register_exception<UnsupportedAngle>(m, "UnsupportedAngle", PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);
  py::register_exception<IllConditioned>(m, "IllConditioned", PyExc_ArithmeticError);

  py::class_<NodeSet>(m, "NodeSet")
      .def(py::init([](const PointMatrix& points, const std::vector<double>& lower, const std::vector<double>& upper) {
             return NodeSet(make_domain(lower, upper), points);
           }),
           py::arg("points"), py::arg("lower"), py::arg("upper"))
      .def_property_readonly("points", &NodeSet::points)
      .def_property_readonly("size", &NodeSet::size)
      .def_property_readonly("dim", &NodeSet::dim)
      .def_property_readonly("lower", [](const NodeSet& n) { return n.domain().lower(); })
      .def_property_readonly("upper", [](const NodeSet& n) { return n.domain().upper(); })
      .def_property_readonly("separation_radius", &NodeSet::separation_radius)
      .def_property_readonly("fill_distance", &NodeSet::fill_distance)
      .def_property_readonly("quasi_uniformity", &NodeSet::quasi_uniformity)
      .def("__len__", &NodeSet::size);

  m.def(
      "generate_grid",
      [](const std::vector<double>& lower, const std::vector<double>& upper, const std::vector<int>& counts) {
        return generate_grid(make_domain(lower, upper), counts);
      },
      py::arg("lower"), py::arg("upper"), py::arg("counts"), "Equispaced tensor grid including the corners.");
  m.def("perturb", &perturb, py::arg("nodes"), py::arg("fraction"), py::arg("seed"),
        "Jitter every interior node by up to fraction * spacing per axis.");
  m.def(
      "uniform_grid",
      [](const std::vector<double>& lower, const std::vector<double>& upper, const std::vector<int>& counts) {
        return uniform_grid(make_domain(lower, upper), counts).points;
      },
      py::arg("lower"), py::arg("upper"), py::arg("counts"));

  m.def("basis_dimension", &dimension, py::arg("degree"), py::arg("dim"));

  m.def(
      "weight_profile",
      [](const std::string& weight, double t) { return phi(WeightSpec::parse(weight), t); }, py::arg("weight"),
      py::arg("t"));
  m.def(
      "admissibility",
      [](const std::string& weight, int dim, int degree, const std::string& method) {
        const Admissibility a = admissibility_report(WeightSpec::parse(weight), dim, degree, parse_method(method));
        return py::make_tuple(a.admissible, a.margin);
      },
      py::arg("weight"), py::arg("dim"), py::arg("degree"), py::arg("method") = "mls",
      "Returns (admissible, margin).");

  py::class_<Engine>(m, "Engine")
      .def(py::init<const NodeSet&, const std::string&, int, const std::string&, const std::string&, double,
                    const std::string&>(),
           py::arg("nodes"), py::arg("kind") = "mls", py::arg("degree") = 1, py::arg("weight") = "gaussian:nu=1",
           py::arg("delta_mode") = "fill", py::arg("delta_factor") = 5.0, py::arg("family") = "chebyshev")
      .def("coefficients", &Engine::coefficients, py::arg("x"), py::call_guard<py::gil_scoped_release>())
      .def("approximate", &Engine::approximate, py::arg("samples"), py::arg("points"),
           py::call_guard<py::gil_scoped_release>())
      .def("lebesgue", &Engine::lebesgue, py::arg("points"), py::call_guard<py::gil_scoped_release>(),
           "Lebesgue function sum_j |a_j(x)| at each point (NaN where the solver failed).")
      .def("reproduction_residual", &Engine::reproduction, py::arg("points"), py::arg("trials") = 10,
           py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("scale", &Engine::scale)
      .def_property_readonly("name", &Engine::name)
      .def_property_readonly("degree", &Engine::degree)
      .def_property_readonly("nodes", &Engine::nodes);

  m.def("franke", &franke, py::arg("x"), py::arg("y"));
  m.def(
      "target",
      [](const std::string& spec, const PointMatrix& points) {
        const TargetFunction f = make_target(spec, static_cast<int>(points.cols()));
        Eigen::VectorXd v(points.rows());
        for (Eigen::Index i = 0; i < points.rows(); ++i) v[i] = f(points.row(i).transpose());
        return v;
      },
      py::arg("spec"), py::arg("points"), "Evaluates sin-pi, franke or polynomial:c0;c1;... at each row.");

  m.def(
      "stability_bound",
      [](double c, const std::string& weight, int dim, int ell) {
        return stability_dict(stability_bound(c, WeightSpec::parse(weight), dim, ell));
      },
      py::arg("c"), py::arg("weight"), py::arg("dim"), py::arg("ell") = 0);
  m.def(
      "theory_constants",
      [](double theta, double radius, int degree) {
        const TheoryConstants tc = theory_constants(theta, radius, degree);
        py::dict d;
        d["C1"] = tc.c1;
        d["C2"] = tc.c2;
        d["h0"] = tc.h0;
        return d;
      },
      py::arg("theta"), py::arg("radius"), py::arg("degree"));

  m.def(
      "run",
      [](const std::string& config_text) {
        const ExperimentConfig c = parse_config_text(config_text);
        py::gil_scoped_release release;
        return run(c);
      },
      py::arg("config_text"), "Runs an experiment described in key = value form and returns its CSV text.");
  m.def("serialize_config", [](const std::string& text) { return serialize(parse_config_text(text)); },
        py::arg("config_text"));
}
