#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "quartic_rg/correspondence.hpp"
#include "quartic_rg/errors.hpp"
#include "quartic_rg/levels.hpp"
#include "quartic_rg/rgflow.hpp"
#include "quartic_rg/solver.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace pybind11::literals;
namespace q = quartic_rg;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Renormalized -g^2/r^4 potential: flow, spectrum, phase shifts, hard-core dictionary";

  auto domain_error = py::register_exception<q::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<q::BracketError>(m, "BracketError", PyExc_RuntimeError);
  py::register_exception<q::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  static py::exception<q::RMinViolation> r_min_error(m, "RMinViolation", domain_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const q::RMinViolation& e) {
      py::object inst = py::reinterpret_borrow<py::object>(r_min_error.ptr())(e.what());
      inst.attr("r_min") = e.r_min();
      inst.attr("target") = e.target();
      PyErr_SetObject(r_min_error.ptr(), inst.ptr());
    }
  });

  py::class_<q::ModelParams>(m, "ModelParams")
      .def(py::init<double, double>(), "g"_a, "phi"_a)
      .def_static("from_scattering_length", &q::ModelParams::from_scattering_length, "g"_a, "scattering_length"_a)
      .def_property_readonly("g", &q::ModelParams::g)
      .def_property_readonly("phi", &q::ModelParams::phi)
      .def_property_readonly("scattering_length", &q::ModelParams::scattering_length)
      .def("__repr__", [](const q::ModelParams& p) {
        return "ModelParams(g=" + std::to_string(p.g()) + ", phi=" + std::to_string(p.phi()) + ")";
      });

  py::class_<q::FlowSample>(m, "FlowSample")
      .def_readonly("R", &q::FlowSample::R)
      .def_readonly("alpha", &q::FlowSample::alpha)
      .def_readonly("omega", &q::FlowSample::omega)
      .def_readonly("alpha_s", &q::FlowSample::alpha_s)
      .def_readonly("branch", &q::FlowSample::branch);

  py::class_<q::FlowCurve>(m, "FlowCurve")
      .def_readonly("params", &q::FlowCurve::params)
      .def_readonly("continuous", &q::FlowCurve::continuous)
      .def_readonly("policy_value", &q::FlowCurve::policy_value)
      .def_readonly("samples", &q::FlowCurve::samples)
      .def_readonly("discontinuities", &q::FlowCurve::discontinuities);

  m.def("omega", [](double alpha, double phi) { return q::omega_of(alpha, phi).omega; }, "alpha"_a, "phi"_a);
  m.def("beta0", &q::beta0, "omega"_a);
  m.def("beta_n", &q::beta_n, "omega"_a, "n"_a);
  m.def("beta_oracle", &q::beta_oracle, "omega"_a, "n"_a);
  m.def("sample_branch",
        [](const q::ModelParams& p, int n, const std::vector<double>& grid) { return q::sample_branch(p, n, grid); },
        "params"_a, "n"_a, "R_grid"_a);
  m.def("continuous_flow",
        [](const q::ModelParams& p, int n, const std::vector<double>& grid) { return q::continuous_flow(p, n, grid); },
        "params"_a, "n_target"_a, "R_grid"_a);
  m.def("find_discontinuities", &q::find_discontinuities, "params"_a, "R_lo"_a, "R_hi"_a);
  m.def("minimal_cutoff", &q::minimal_cutoff, "params"_a, "n_target"_a);
  m.def("flow_alpha_s", &q::flow_alpha_s, "params"_a, "n"_a, "R"_a);
  m.def("count_bound_states", &q::count_bound_states, "alpha_s"_a, "alpha"_a, "phi"_a);

  py::class_<q::Regularized>(m, "Regularized")
      .def(py::init([](double alpha_s, double R, double g) { return q::Regularized{alpha_s, R, g}; }), "alpha_s"_a,
           "R"_a, "g"_a)
      .def_readonly("alpha_s", &q::Regularized::alpha_s)
      .def_readonly("R", &q::Regularized::R)
      .def_readonly("g", &q::Regularized::g);
  py::class_<q::HardCore>(m, "HardCore")
      .def(py::init([](double Rc, double g) { return q::HardCore{Rc, g}; }), "Rc"_a, "g"_a)
      .def_readonly("Rc", &q::HardCore::Rc)
      .def_readonly("g", &q::HardCore::g);
  m.def("regularized_on_branch", &q::regularized_on_branch, "params"_a, "n"_a, "R"_a);

  py::class_<q::BoundState>(m, "BoundState")
      .def_readonly("kappa", &q::BoundState::kappa)
      .def_readonly("energy", &q::BoundState::energy)
      .def_readonly("nodes", &q::BoundState::nodes)
      .def_readonly("rms_radius", &q::BoundState::rms_radius)
      .def_readonly("weakest", &q::BoundState::weakest);

  m.def("bound_states", [](const q::PotentialSpec& s) { return q::bound_states(s); }, "spec"_a);
  m.def("weakest_state", [](const q::PotentialSpec& s) { return q::weakest_state(s); }, "spec"_a);
  m.def("zero_energy_nodes", [](const q::PotentialSpec& s) { return q::zero_energy_nodes(s); }, "spec"_a);
  m.def(
      "wavefunction",
      [](const q::PotentialSpec& s, const q::BoundState& st, const std::vector<double>& radii) {
        return q::bound_state_wavefunction(s, st, radii);
      },
      "spec"_a, "state"_a, "radii"_a);
  m.def("phase_shift", [](double k, const q::PotentialSpec& s) { return q::phase_shift(k, s); }, "k"_a, "spec"_a);
  m.def(
      "phase_curve",
      [](const q::PotentialSpec& s, const std::vector<double>& ks) {
        const auto curve = q::phase_curve(s, ks);
        std::vector<double> out;
        out.reserve(curve.samples.size());
        for (const auto& p : curve.samples) out.push_back(p.delta);
        return out;
      },
      "spec"_a, "k_grid"_a, "Unwrapped phase shift on k_grid.");

  m.def("hardcore_scattering_length", &q::hardcore_scattering_length, "g"_a, "Rc"_a);
  m.def("phi_from_scattering_length", &q::phi_from_scattering_length, "L"_a, "g"_a);
  m.def("hardcore_radius", &q::hardcore_radius, "g"_a, "phi"_a, "s"_a = 1);
  m.def("wkb_kappa_limit", &q::wkb_kappa_limit, "g"_a, "phi"_a);
  m.def("wkb_kappa_finite", &q::wkb_kappa_finite, "alpha_s"_a, "R"_a, "g"_a, "n"_a);
  m.def("wkb_action", &q::wkb_action, "E"_a, "alpha_s"_a, "R"_a, "g"_a);

  m.def(
      "c60_report",
      [](double alpha_p, std::optional<double> phi, std::optional<double> radius_angstrom,
         std::optional<double> scattering_length_a0) {
        const auto r = q::c60_report(alpha_p, {phi, radius_angstrom, scattering_length_a0});
        py::dict d;
        d["alpha_p"] = r.alpha_p;
        d["g_a0"] = r.g_a0;
        d["phi"] = r.phi;
        d["s"] = r.s;
        d["scattering_length_a0"] = r.scattering_length_a0;
        d["radius_a0"] = r.radius_a0;
        d["radius_angstrom"] = r.radius_angstrom;
        d["g_kappa"] = r.g_kappa;
        d["binding_meV"] = r.binding_meV;
        d["g_kappa_R"] = r.g_kappa_R;
        d["binding_meV_R"] = r.binding_meV_R;
        return d;
      },
      "alpha_p"_a, py::kw_only(), "phi"_a = py::none(), "radius_angstrom"_a = py::none(),
      "scattering_length_a0"_a = py::none());

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
