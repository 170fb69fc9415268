#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "chernlab/classify.hpp"
#include "chernlab/curvature.hpp"
#include "chernlab/errors.hpp"
#include "chernlab/manifolds.hpp"
#include "chernlab/report.hpp"
#include "chernlab/spec.hpp"

namespace py = pybind11;
using namespace chernlab;

namespace {

using Point = std::vector<cplx>;

/// Geometry is not copyable; Python holds it through a shared pointer.
std::shared_ptr<Geometry> compile(const ManifoldSpec& spec) { return std::make_shared<Geometry>(spec); }

void check_point(const Geometry& g, const Point& p) {
  if (static_cast<int>(p.size()) != g.dim()) throw py::value_error("point has the wrong number of coordinates");
}

py::array_t<cplx> to_array(const CMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.size());
  py::array_t<cplx> a({n, n});
  auto v = a.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t j = 0; j < n; ++j) v(i, j) = m(static_cast<int>(i), static_cast<int>(j));
  return a;
}

py::dict to_dict(const classify::ConditionReport& rep) {
  py::dict conditions;
  for (const auto& c : rep.conditions) {
    py::dict row;
    row["verdict"] = classify::to_string(c.verdict);
    row["max_residual"] = c.max_residual;
    conditions[py::str(c.name)] = row;
  }
  py::dict d;
  d["class"] = classify::to_string(rep.pf_class);
  d["conditions"] = conditions;
  d["gauduchon_precondition"] = rep.gauduchon_precondition;
  if (rep.gauduchon_degree) {
    d["integral_s_dV"] = rep.gauduchon_degree->value;
    d["standard_error"] = rep.gauduchon_degree->standard_error;
  } else {
    d["integral_s_dV"] = py::none();
    d["standard_error"] = py::none();
  }
  d["samples"] = rep.samples;
  d["singular_points"] = rep.singular_points;
  d["notes"] = rep.notes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_chernlab, m) {
  m.doc() = "Chern curvature and projectively flat classification of Hermitian metrics";

  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<SingularMetric> singular_metric(m, "SingularMetric", PyExc_ArithmeticError);
  static py::exception<ChartSingularity> chart_singularity(m, "ChartSingularity", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const SingularMetric& e) {
      py::set_error(singular_metric, e.what());
    } catch (const ChartSingularity& e) {
      py::set_error(chart_singularity, e.what());
    }
  });

  py::class_<ManifoldSpec>(m, "Spec")
      .def_readonly("name", &ManifoldSpec::name)
      .def_readonly("dimension", &ManifoldSpec::n)
      .def("to_json", [](const ManifoldSpec& s) { return to_json(s); })
      .def("conformal", [](const ManifoldSpec& s, const std::string& u) {
        return classify::conformal_transform(s, expr::parse_expression(u, s.n));
      }, py::arg("u"), "exp(u) times the metric; u must be real-valued")
      .def("__repr__", [](const ManifoldSpec& s) {
        return "<chernlab.Spec " + s.name + " n=" + std::to_string(s.n) + ">";
      });

  m.def("parse_spec", [](const std::string& text) { return parse_metric_spec(text); }, py::arg("text"));
  m.def("builtin", [](const std::string& name, int n, double rho0, std::vector<double> lambda, std::string u) {
    manifolds::BuiltinParams p;
    p.n = n;
    p.rho0 = rho0;
    p.lambda = std::move(lambda);
    p.u = std::move(u);
    return manifolds::builtin(name, p);
  }, py::arg("name"), py::arg("n") = 2, py::arg("rho0") = 0.5, py::arg("lambda_") = std::vector<double>{},
        py::arg("u") = "");
  m.def("builtin_names", &manifolds::builtin_names);

  py::class_<Geometry, std::shared_ptr<Geometry>>(m, "Geometry")
      .def(py::init(&compile), py::arg("spec"))
      .def_property_readonly("dimension", &Geometry::dim)
      .def("metric", [](const Geometry& g, const Point& p) {
        check_point(g, p);
        return to_array(g.metric(p));
      }, py::arg("point"))
      .def("curvature", [](const Geometry& g, const Point& p) {
        check_point(g, p);
        const auto t = curvature::chern_curvature(g, p);
        const auto n = static_cast<py::ssize_t>(g.dim());
        py::array_t<cplx> a({n, n, n, n});
        auto v = a.mutable_unchecked<4>();
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) v(i, j, k, l) = t(i, j, k, l);
        return a;
      }, py::arg("point"), "Theta[i, j, k, l] = Theta_{i jbar k lbar}")
      .def("ricci", [](const Geometry& g, const Point& p, int kind) {
        check_point(g, p);
        if (kind < 1 || kind > 3) throw py::value_error("kind must be 1, 2 or 3");
        return to_array(curvature::ricci(curvature::chern_curvature(g, p), g.metric(p), kind).m);
      }, py::arg("point"), py::arg("kind") = 1)
      .def("scalar_curvatures", [](const Geometry& g, const Point& p) {
        check_point(g, p);
        const auto s = curvature::scalar_curvatures(curvature::chern_curvature(g, p), g.metric(p));
        return py::make_tuple(s.s, s.s_hat);
      }, py::arg("point"), "(s, s_hat)")
      .def("pf_residual", [](const Geometry& g, const Point& p) {
        check_point(g, p);
        return classify::pf_residual(g, p);
      }, py::arg("point"))
      .def("sample", [](const Geometry& g, int count, std::uint64_t seed) {
        return manifolds::sample_domain(g.spec().domain, g.dim(), count, seed);
      }, py::arg("count"), py::arg("seed") = 1);

  m.def("classify", [](const ManifoldSpec& spec, int samples, std::uint64_t seed) {
    const Geometry g(spec);
    classify::ClassifyOptions o;
    o.samples = samples;
    o.seed = seed;
    classify::ConditionReport rep;
    {
      py::gil_scoped_release release;
      rep = classify::classify_pf(g, o);
    }
    return to_dict(rep);
  }, py::arg("spec"), py::arg("samples") = 200, py::arg("seed") = 1);

  m.def("analyze_report", [](const ManifoldSpec& spec, int points, std::uint64_t seed) {
    const Geometry g(spec);
    classify::ClassifyOptions o;
    o.samples = points;
    o.seed = seed;
    o.identities = true;
    const auto rep = classify::classify_pf(g, o);
    return report::render(spec, &rep, &rep.identities, {"analyze", points, seed, o.tol, false, std::nullopt});
  }, py::arg("spec"), py::arg("points") = 100, py::arg("seed") = 1,
        "The JSON report of the analyze command, byte-identical to the command-line output");
}
