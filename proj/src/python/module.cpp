#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gammaflow/curvature.hpp"
#include "gammaflow/error.hpp"
#include "gammaflow/families.hpp"
#include "gammaflow/gamma.hpp"
#include "gammaflow/graph_io.hpp"
#include "gammaflow/heat.hpp"
#include "gammaflow/metrics.hpp"
#include "gammaflow/verify.hpp"

namespace py = pybind11;
using namespace gammaflow;

namespace {

py::dict report_dict(const WeightedGraph& g, const VerificationReport& r) {
  return py::module_::import("json").attr("loads")(report_to_json(g, r).dump());
}

WeightedGraph graph_from_python(const std::vector<std::pair<std::string, double>>& vertices,
                                const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  std::vector<VertexInput> vs;
  for (const auto& [id, m] : vertices) vs.push_back({id, m});
  std::vector<EdgeInput> es;
  for (const auto& [u, v, mu] : edges) es.push_back({u, v, mu});
  return build_graph(vs, es);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted-graph curvature, heat semigroup and gradient-estimate checks";

  static py::exception<Error> error(m, "GammaflowError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def(py::init(&graph_from_python), py::arg("vertices"), py::arg("edges"),
           "vertices: [(id, m)], edges: [(u, v, mu)]")
      .def_property_readonly("size", &WeightedGraph::size)
      .def_property_readonly("ids", &WeightedGraph::ids)
      .def_property_readonly("measure", &WeightedGraph::measure)
      .def("index_of", &WeightedGraph::index_of)
      .def("to_json", [](const WeightedGraph& g) { return serialize_graph(g); })
      .def_static("from_json", [](const std::string& text) { return parse_graph(text); })
      .def("__len__", &WeightedGraph::size);

  m.def("family", [](const std::string& spec, const std::string& m_expr, const std::string& b_expr,
                     std::optional<std::string> flavor) {
    std::optional<Flavor> fl;
    if (flavor) fl = parse_flavor(*flavor);
    return generate_family(parse_family_spec(spec, m_expr, b_expr, fl));
  }, py::arg("spec"), py::arg("m") = "1", py::arg("b") = "1", py::arg("flavor") = py::none());
  m.def("random_graph", [](std::size_t n, std::uint64_t seed) {
    RandomGraphOptions o;
    o.vertices = n;
    return random_connected_graph(o, seed);
  }, py::arg("vertices"), py::arg("seed"));

  m.def("laplacian", &laplacian);
  m.def("gamma", py::overload_cast<const WeightedGraph&, const VertexFunction&>(&gamma));
  m.def("gamma_pair", py::overload_cast<const WeightedGraph&, const VertexFunction&, const VertexFunction&>(&gamma));
  m.def("gamma2", py::overload_cast<const WeightedGraph&, const VertexFunction&>(&gamma2));
  m.def("delta", py::overload_cast<const WeightedGraph&, const std::string&>(&delta));

  m.def("curvature_forms", [](const WeightedGraph& g, const std::string& x) {
    const auto f = curvature_forms(g, g.index_of(x));
    std::vector<std::string> basis;
    for (auto b : f.basis) basis.push_back(g.id(b));
    return py::make_tuple(basis, f.gamma_matrix, f.gamma2_matrix);
  });
  m.def("curvature", [](const WeightedGraph& g, const std::string& x, double tol) {
    const auto r = bakry_emery_curvature(g, g.index_of(x), {tol});
    py::dict d;
    d["curvature"] = r.curvature;
    d["bracket"] = py::make_tuple(r.bracket_lo, r.bracket_hi);
    d["minimizer"] = r.minimizer;
    return d;
  }, py::arg("graph"), py::arg("vertex"), py::arg("tol") = 1e-8);
  m.def("curvature_profile", [](const WeightedGraph& g, double tol, unsigned jobs) {
    const auto p = curvature_profile(g, {tol}, jobs);
    std::vector<double> ks;
    for (const auto& r : p.vertices) ks.push_back(r.curvature);
    return py::make_tuple(ks, p.k_min);
  }, py::arg("graph"), py::arg("tol") = 1e-8, py::arg("jobs") = 1);
  m.def("verify_cd", [](const WeightedGraph& g, double K, int trials, std::uint64_t seed) {
    return report_dict(g, verify_cd(g, K, trials, seed));
  }, py::arg("graph"), py::arg("K"), py::arg("trials") = 20, py::arg("seed") = 0);

  m.def("intrinsic_metric", [](const WeightedGraph& g, const std::string& base) {
    return default_intrinsic_metric(g, g.index_of(base)).dist;
  });
  m.def("cutoff", [](const WeightedGraph& g, const std::string& base, double r, double R) {
    return cutoff(default_intrinsic_metric(g, g.index_of(base)), r, R);
  });

  m.def("heat", [](const WeightedGraph& g, double t, const VertexFunction& f, const std::string& mode) {
    return build_semigroup(g, parse_heat_mode(mode)).apply(t, f);
  }, py::arg("graph"), py::arg("t"), py::arg("f"), py::arg("mode") = "auto");
  m.def("heat_spectrum", [](const WeightedGraph& g) { return build_semigroup(g, HeatMode::spectral).eigenvalues(); });
  m.def("heat_mass", [](const WeightedGraph& g, const std::vector<std::string>& domain, double t, const std::string& x) {
    std::vector<VertexIndex> idx;
    for (const auto& id : domain) idx.push_back(g.index_of(id));
    return heat_mass(dirichlet_restriction(g, idx), t, g.index_of(x));
  });
  m.def("mass_curve", [](const std::string& spec, const std::string& m_expr, const std::string& b_expr, double t,
                         const std::vector<double>& radii) {
    const auto c = exhaustion_mass_curve(parse_family_spec(spec, m_expr, b_expr), t, radii);
    return py::make_tuple(c.masses, c.deficits);
  }, py::arg("spec"), py::arg("m") = "1", py::arg("b") = "1", py::arg("t") = 1.0, py::arg("radii"));
  m.def("completeness_verdict", [](const std::string& spec, const std::string& m_expr, const std::string& b_expr,
                                   double t, const std::vector<double>& radii) {
    const auto a = check_stochastic_completeness(parse_family_spec(spec, m_expr, b_expr), t, radii);
    return std::string(to_string(a.verdict));
  }, py::arg("spec"), py::arg("m") = "1", py::arg("b") = "1", py::arg("t") = 1.0, py::arg("radii"));

  m.def("check_names", &check_names);
  m.def("run_checks", [](const WeightedGraph& g, const std::vector<std::string>& names, std::optional<double> K,
                         std::uint64_t seed, int trials) {
    SuiteConfig c;
    c.K = K;
    c.seed = seed;
    c.trials = trials;
    py::list out;
    for (const auto& r : run_checks(g, names, c)) out.append(report_dict(g, r));
    return out;
  }, py::arg("graph"), py::arg("names"), py::arg("K") = py::none(), py::arg("seed") = 0, py::arg("trials") = 20);
}
