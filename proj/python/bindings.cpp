#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <sstream>

#include "aniso/biaxial.hpp"
#include "aniso/cli.hpp"
#include "aniso/greens.hpp"
#include "aniso/interp.hpp"
#include "aniso/localfield.hpp"
#include "aniso/uniaxial.hpp"
#include "aniso/validation.hpp"

namespace py = pybind11;
using namespace aniso;

namespace {

using Triple = std::array<double, 3>;

PermittivityTensor tensor(const Triple& e) { return {e[0], e[1], e[2]}; }
Direction direction(const Triple& d) { return Direction::normalized(d[0], d[1], d[2]); }

py::dict quadrature_dict(const QuadratureResult& q) {
  py::dict d;
  d["value"] = q.value;
  d["est_rel_error"] = q.est_rel_error;
  d["theta_order"] = q.theta_order;
  d["phi_points"] = q.phi_points;
  d["error_history"] = q.error_history;
  return d;
}

py::dict rate_dict(const RateResult& r) {
  py::dict d;
  d["gamma_normalized"] = r.gamma_normalized;
  d["method"] = std::string(to_string(r.method));
  py::list branches;
  for (const auto& b : r.branches) branches.append(py::make_tuple(b.label, b.gamma));
  d["branches"] = branches;
  d["quadrature"] = r.quadrature ? py::object(quadrature_dict(*r.quadrature)) : py::none();
  return d;
}

QuadratureSpec make_spec(double tol, int theta_rule, int phi_points, int max_order) {
  QuadratureSpec s{theta_rule, phi_points, tol, max_order};
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spontaneous emission rates of a dipole in an anisotropic dielectric";

  py::register_exception<ToleranceNotReached>(m, "ToleranceNotReached", PyExc_RuntimeError);

  m.def(
      "rate_numeric",
      [](const Triple& eps, const Triple& dipole, double tol, int theta_rule, int phi_points, int max_order) {
        return rate_dict(rate_numeric(tensor(eps), direction(dipole), make_spec(tol, theta_rule, phi_points, max_order)));
      },
      py::arg("eps"), py::arg("dipole") = Triple{0, 0, 1}, py::arg("tol") = 1e-10, py::arg("theta_rule") = 64,
      py::arg("phi_points") = 128, py::arg("max_order") = 2048);

  m.def(
      "rate_model", [](const Triple& eps, const Triple& dipole) { return rate_dict(rate_model(tensor(eps), direction(dipole))); },
      py::arg("eps"), py::arg("dipole") = Triple{0, 0, 1});

  m.def(
      "rate_uniaxial",
      [](double eps1, double eps2, double alpha) {
        return rate_dict(rate_uniaxial_total({eps1, eps2}, DipoleSplit::at_angle(alpha)));
      },
      py::arg("eps1"), py::arg("eps2"), py::arg("alpha"), "Closed form; alpha is the dipole angle from the axis.");

  m.def(
      "rate_local_field",
      [](const Triple& eps, const Triple& dipole, const Triple& l) {
        return rate_dict(rate_biaxial_local(tensor(eps), direction(dipole), {l[0], l[1], l[2]}));
      },
      py::arg("eps"), py::arg("dipole"), py::arg("local_field"));

  m.def(
      "interp_breakdown",
      [](const Triple& eps) {
        const InterpBreakdown b = interp_breakdown(tensor(eps));
        py::dict d;
        d["gamma_a"] = b.gamma_a;
        d["gamma_b"] = b.gamma_b;
        d["gamma_lin_x"] = b.gamma_lin_x;
        d["gamma_lin_y"] = b.gamma_lin_y;
        d["gamma_model"] = b.gamma_model;
        return d;
      },
      py::arg("eps"));

  m.def(
      "angular_distribution", [](double eps1, double eps2, double theta) { return angular_distribution({eps1, eps2}, theta); },
      py::arg("eps1"), py::arg("eps2"), py::arg("theta"));
  m.def(
      "peak_emission_angles", [](double eps1, double eps2) { return peak_emission_angles({eps1, eps2}); },
      py::arg("eps1"), py::arg("eps2"));
  m.def(
      "random_orientation_rate", [](double eps1, double eps2) { return rate_random_orientation({eps1, eps2}); },
      py::arg("eps1"), py::arg("eps2"));

  m.def(
      "solve_modes",
      [](const Triple& eps, const Triple& kappa) {
        const ModePair p = solve_modes(tensor(eps), direction(kappa));
        py::list out;
        for (int i = 0; i < 2; ++i) {
          const Vec3& e = p[i].polarization.vec();
          out.append(py::make_tuple(p[i].eps_eff, Triple{e[0], e[1], e[2]}, std::string(to_string(p[i].branch))));
        }
        return out;
      },
      py::arg("eps"), py::arg("kappa"));

  m.def(
      "greens_rate",
      [](const Triple& eps, const Triple& dipole) {
        return imag_greens_trace(tensor(eps), direction(dipole), default_rate_spec()).gamma_normalized;
      },
      py::arg("eps"), py::arg("dipole") = Triple{0, 0, 1});
  m.def(
      "completeness_defect",
      [](const Triple& eps, const Triple& kappa) {
        return completeness_defect(tensor(eps), direction(kappa)).cwiseAbs().maxCoeff();
      },
      py::arg("eps"), py::arg("kappa"));

  m.def(
      "validate",
      [](std::uint64_t seed) {
        const ValidationReport r = run_validation({seed, false});
        py::list checks;
        for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.worst_defect, c.tolerance, c.passed));
        return py::make_tuple(r.passed, checks);
      },
      py::arg("seed") = 42);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs aniso-emit in-process; returns (exit_code, stdout, stderr).");
}
