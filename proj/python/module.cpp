// Python bindings: kernels, Gauss rules, the verification suites and the
// restriction harness.  Complex vectors cross as lists of Python complex.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dunklsb/kernel.hpp"
#include "dunklsb/polar.hpp"
#include "dunklsb/quadrature.hpp"
#include "dunklsb/report.hpp"

namespace py = pybind11;
using namespace dunklsb;

namespace {

std::string run_json(const std::string& config_json, bool with_runtime) {
  RunConfig cfg = config_from_json(nlohmann::json::parse(config_json));
  VerificationReport rep;
  {
    py::gil_scoped_release nogil;
    rep = run_suite(cfg);
  }
  return rep.to_json(with_runtime).dump();
}

py::dict restriction(const std::vector<double>& k, double t, int basis, int degree, int nodes) {
  RestrictionOptions o;
  o.max_deg = basis;
  o.degree = degree;
  o.nodes = nodes;
  MultiplicitySetup s(k, t);
  RestrictionReport r;
  {
    py::gil_scoped_release nogil;
    r = verify_restriction_principle(s, o);
  }
  py::dict d;
  d["u_minus_c"] = r.u_minus_c;
  d["rrstar_minus_heat"] = r.rrstar_minus_heat;
  d["sigma_max"] = r.sigma_max;
  d["sigma_min"] = r.sigma_min;
  d["c_isometry_dev"] = r.c_isometry_dev;
  d["literal_u_minus_c"] = r.literal_u_minus_c;
  d["cross_parity_max"] = r.cross_parity_max;
  d["domain_size"] = r.domain_size;
  d["codomain_size"] = r.codomain_size;
  d["rank_deficient"] = r.rank_deficient;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dunklsb, m) {
  m.doc() = "Dunkl Segal-Bargmann numerics for Z_2^N";

  py::register_exception<KernelConvergenceError>(m, "KernelConvergenceError", PyExc_RuntimeError);

  m.def("gamma_factor", &gamma_factor, py::arg("k"), py::arg("n"));
  m.def("mms_constant", [](const std::vector<double>& k) { return mms_constant(MultiplicitySetup(k, 1.0)); },
        py::arg("k"));
  m.def(
      "dunkl_kernel",
      [](const std::vector<double>& k, const std::vector<cplx>& z, const std::vector<cplx>& w) {
        return dunkl_kernel(MultiplicitySetup(k, 1.0), z, w);
      },
      py::arg("k"), py::arg("z"), py::arg("w"));
  m.def(
      "heat_kernel",
      [](const std::vector<double>& k, const std::vector<cplx>& z, const std::vector<cplx>& w, double s) {
        return heat_kernel(MultiplicitySetup(k, s), z, w, s);
      },
      py::arg("k"), py::arg("z"), py::arg("w"), py::arg("s") = 1.0);
  m.def(
      "gauss_rule",
      [](double k, double t, int n) {
        auto r = gauss_rule_1d(k, t, n);
        return py::make_tuple(r.nodes, r.weights);
      },
      py::arg("k"), py::arg("t"), py::arg("n"),
      "Nodes and weights of the n-point Gauss rule for e^{-q^2/2t} domega_{k,t}.");
  m.def("run_suite_json", &run_json, py::arg("config_json"), py::arg("with_runtime") = false);
  m.def("restriction_report", &restriction, py::arg("k"), py::arg("t") = 1.0, py::arg("basis") = 10,
        py::arg("degree") = 40, py::arg("nodes") = 80);
  m.def(
      "norm_probe",
      [](const std::vector<double>& k, double width, int nodes) {
        return operator_norm_probe(MultiplicitySetup(k, 1.0), width, nodes).quotient;
      },
      py::arg("k"), py::arg("width"), py::arg("nodes") = 600);
}
