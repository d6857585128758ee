#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "morsecone/bubble.hpp"
#include "morsecone/cap_spectrum.hpp"
#include "morsecone/errors.hpp"
#include "morsecone/io.hpp"
#include "morsecone/morse.hpp"
#include "morsecone/radial_solver.hpp"
#include "morsecone/singular_spectrum.hpp"

namespace py = pybind11;
using namespace morsecone;

namespace {

// Documents cross the boundary as JSON text; the Python side parses them.
template <class T>
std::string dump(const T& value) {
  return io::to_json(value).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Morse indices of radial Lane-Emden solutions on cones and sectors";

  // Errors surface as MorseconeError("<ErrorClass>: <message>").
  static py::exception<Error> error(m, "MorseconeError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string text = std::string(e.class_name()) + ": " + e.what();
      PyErr_SetString(error.ptr(), text.c_str());
    }
  });

  m.def("critical_exponent", &critical_exponent, py::arg("N"));

  py::class_<RadialSolution>(m, "RadialSolution")
      .def_property_readonly("N", &RadialSolution::dimension)
      .def_property_readonly("p", &RadialSolution::exponent)
      .def_property_readonly("peak", &RadialSolution::peak)
      .def_property_readonly("unscaled_zero", &RadialSolution::unscaled_zero)
      .def_property_readonly("r", &RadialSolution::r)
      .def_property_readonly("u", &RadialSolution::u)
      .def_property_readonly("du", &RadialSolution::du)
      .def("value", &RadialSolution::value, py::arg("r"))
      .def("derivative", &RadialSolution::derivative, py::arg("r"))
      .def("header_json", [](const RadialSolution& s) { return io::radial_header(s).dump(); });

  m.def(
      "solve_lane_emden",
      [](int n, double p, std::size_t grid_size) {
        RadialOptions options;
        options.grid_size = grid_size;
        return solve_lane_emden(n, p, options);
      },
      py::arg("N"), py::arg("p"), py::arg("grid_size") = 4096);
  m.def("ode_residual", &ode_residual, py::arg("solution"));

  m.def(
      "singular_spectrum",
      [](int n, double p, int k_max, double tol) {
        const auto a = linearized_potential(solve_lane_emden(n, p));
        return dump(negative_singular_eigenvalues(n, a, k_max, tol));
      },
      py::arg("N"), py::arg("p"), py::arg("k_max") = 8, py::arg("tol") = 1e-10,
      "Negative singular radial eigenvalues as a singular_spectrum JSON document.");
  m.def(
      "first_singular_eigenvalue",
      [](int n, double p, double tol) { return first_singular_eigenvalue(n, p, tol); },
      py::arg("N"), py::arg("p"), py::arg("tol") = 1e-10);
  m.def(
      "singular_oracle",
      [](int n, double p, int grid_size) {
        const auto a = linearized_potential(solve_lane_emden(n, p));
        const auto o = dense_oracle_singular(n, a, grid_size);
        return py::make_tuple(o.h, o.values);
      },
      py::arg("N"), py::arg("p"), py::arg("grid_size"));
  m.def(
      "hardy_quotient",
      [](int n, const std::vector<double>& r, const std::vector<double>& v) {
        return hardy_quotient(n, r, v);
      },
      py::arg("N"), py::arg("r"), py::arg("v"));
  m.def("hardy_constant", &hardy_constant, py::arg("N"));

  m.def(
      "cap_spectrum",
      [](int n, double theta0, double lambda_max) {
        return dump(cap_neumann_eigenvalues(n, theta0, lambda_max));
      },
      py::arg("N"), py::arg("theta0"), py::arg("lambda_max"),
      "Neumann spectrum of the cap as a cap_spectrum JSON document.");
  m.def("angular_branch_eigenvalue", &angular_branch_eigenvalue, py::arg("N"), py::arg("ell"),
        py::arg("theta0"), py::arg("mode"), py::arg("tol") = 1e-12);
  m.def("multiplicity", &multiplicity, py::arg("ell"), py::arg("N"));
  m.def("cap_area", &cap_area, py::arg("N"), py::arg("theta0"));

  m.def(
      "morse_report",
      [](int n, double p, const std::string& angular_json, int k_max, double tol) {
        const auto radial =
            negative_singular_eigenvalues(n, linearized_potential(solve_lane_emden(n, p)), k_max, tol);
        return dump(morse_index_direct(radial, load_spectrum(angular_json)));
      },
      py::arg("N"), py::arg("p"), py::arg("angular_json"), py::arg("k_max") = 8,
      py::arg("tol") = 1e-10, "Morse report for the cone over the given angular spectrum (JSON).");
  m.def(
      "count_equality",
      [](int n, double p, double theta0) {
        const auto a = linearized_potential(solve_lane_emden(n, p));
        const double cutoff = standard_shift_cutoff(n, a);
        return dump(verify_count_equality(n, a, cap_neumann_eigenvalues(n, theta0, cutoff * 1.01)));
      },
      py::arg("N"), py::arg("p"), py::arg("theta0"));
  m.def(
      "bubble_morse",
      [](int n, const std::string& angular_json) { return bubble_morse(load_spectrum(angular_json), n); },
      py::arg("N"), py::arg("angular_json"));
  m.def(
      "threshold",
      [](int n, const std::string& angular_json, double tol, int jobs) {
        ThresholdOptions options;
        options.jobs = jobs;
        return dump(symmetry_breaking_threshold(n, load_spectrum(angular_json), tol, options));
      },
      py::arg("N"), py::arg("angular_json"), py::arg("tol") = 1e-4, py::arg("jobs") = 1);
  m.def(
      "limit_study",
      [](int n, const std::vector<double>& ps, double tol, int jobs) {
        return dump(limit_study(n, ps, tol, jobs));
      },
      py::arg("N"), py::arg("ps"), py::arg("tol") = 1e-10, py::arg("jobs") = 1);

  py::enum_<BubbleNormalization>(m, "BubbleNormalization")
      .value("Standard", BubbleNormalization::Standard)
      .value("UnitPeak", BubbleNormalization::UnitPeak);
  m.def("bubble_value", &bubble_value, py::arg("N"), py::arg("scale"), py::arg("r"),
        py::arg("normalization") = BubbleNormalization::Standard);
  m.def(
      "bubble_residual",
      [](int n, double scale, double r, BubbleNormalization norm) {
        return Bubble{n, scale, norm}.residual(r);
      },
      py::arg("N"), py::arg("scale"), py::arg("r"),
      py::arg("normalization") = BubbleNormalization::Standard);
  m.def("eta_value", &eta_value, py::arg("N"), py::arg("r"));
  m.def("eta_residual", &eta_residual, py::arg("N"), py::arg("r"),
        py::arg("include_inverse_square") = true);
  m.def(
      "eta_rayleigh_quotient", [](int n) { return eta_rayleigh_quotient(n).quotient; },
      py::arg("N"));
  m.def("q_u_on_bubble", &q_u_on_bubble, py::arg("N"), py::arg("theta0"));
  m.def(
      "step1_form",
      [](int n, int ell, double theta0, double lambda) {
        return dump(step1_test_function_form(n, ell, theta0, lambda));
      },
      py::arg("N"), py::arg("ell"), py::arg("theta0"), py::arg("lambda_"));
}
