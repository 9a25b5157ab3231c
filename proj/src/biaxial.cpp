#include "aniso/biaxial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aniso {

namespace {

constexpr double kRateScale = 3.0 / (8.0 * std::numbers::pi);

}  // namespace

std::string_view to_string(MethodTag tag) {
  switch (tag) {
    case MethodTag::closed_form: return "closed-form";
    case MethodTag::quadrature: return "quadrature";
    case MethodTag::interpolation_model: return "interpolation-model";
  }
  return "unknown";
}

QuadratureSpec default_rate_spec() { return QuadratureSpec{64, 128, 1e-10, 2048}; }

std::array<double, 2> rate_integrand_branches(const PermittivityTensor& eps,
                                              const Direction& dipole, const Direction& kappa) {
  const ModePair modes = solve_modes(eps, kappa);
  std::array<double, 2> out{};
  for (int i = 0; i < 2; ++i) {
    const ModeSolution& mode = modes[i];
    const double coupling = dipole.vec().dot(mode.polarization.vec());
    out[i] = mode.eps_eff * mode.n_eff * coupling * coupling / mode_normalization(eps, mode);
  }
  return out;
}

double rate_integrand(const PermittivityTensor& eps, const Direction& dipole, double theta,
                      double phi) {
  const auto b = rate_integrand_branches(eps, dipole, Direction::from_angles(theta, phi));
  return b[0] + b[1];
}

RateResult rate_numeric(const PermittivityTensor& eps, const Direction& dipole,
                        const QuadratureSpec& spec) {
  try {
    const SplitQuadratureResult q = integrate_split(
        [&](const Direction& kappa) { return rate_integrand_branches(eps, dipole, kappa); }, spec);
    RateResult r;
    r.gamma_normalized = kRateScale * q.total.value;
    r.branches[0] = {"slow", kRateScale * q.parts[0]};
    r.branches[1] = {"fast", kRateScale * q.parts[1]};
    r.quadrature = q.total;
    r.quadrature->value = r.gamma_normalized;
    r.method = MethodTag::quadrature;
    return r;
  } catch (ToleranceNotReached& e) {
    QuadratureResult best = e.best();
    best.value *= kRateScale;
    throw ToleranceNotReached(best);
  }
}

std::array<RateResult, 3> axis_rates(const PermittivityTensor& eps, const QuadratureSpec& spec) {
  return {rate_numeric(eps, Direction::axis(0), spec), rate_numeric(eps, Direction::axis(1), spec),
          rate_numeric(eps, Direction::axis(2), spec)};
}

RateResult combine_axis_rates(const std::array<RateResult, 3>& per_axis,
                              const std::array<double, 3>& weights) {
  int first = 0;
  while (first < 2 && weights[first] == 0.0) ++first;
  RateResult r;
  r.method = per_axis[first].method;
  r.branches = per_axis[first].branches;
  for (auto& b : r.branches) b.gamma = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (weights[i] == 0.0) continue;
    r.gamma_normalized += weights[i] * per_axis[i].gamma_normalized;
    for (int b = 0; b < 2; ++b) r.branches[b].gamma += weights[i] * per_axis[i].branches[b].gamma;
    if (per_axis[i].quadrature) {
      if (!r.quadrature) {
        r.quadrature = per_axis[i].quadrature;
      } else {
        r.quadrature->est_rel_error =
            std::max(r.quadrature->est_rel_error, per_axis[i].quadrature->est_rel_error);
        r.quadrature->theta_order =
            std::max(r.quadrature->theta_order, per_axis[i].quadrature->theta_order);
        r.quadrature->phi_points =
            std::max(r.quadrature->phi_points, per_axis[i].quadrature->phi_points);
      }
    }
  }
  if (r.quadrature) {
    r.quadrature->value = r.gamma_normalized;
    r.quadrature->error_history.clear();
  }
  return r;
}

RateResult rate_arbitrary_dipole(const PermittivityTensor& eps, const Direction& dipole,
                                 const QuadratureSpec& spec) {
  std::array<RateResult, 3> per_axis;
  std::array<double, 3> weights{};
  for (int i = 0; i < 3; ++i) {
    weights[i] = dipole[i] * dipole[i];
    // Components that are exactly zero carry no weight; skip their quadrature.
    if (weights[i] != 0.0) per_axis[i] = rate_numeric(eps, Direction::axis(i), spec);
  }
  return combine_axis_rates(per_axis, weights);
}

}  // namespace aniso
