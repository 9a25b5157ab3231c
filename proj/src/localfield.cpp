#include "aniso/localfield.hpp"

#include <algorithm>
#include <cmath>

namespace aniso {

namespace {

int aligned_axis(const Direction& axis) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(std::abs(axis[i]) - 1.0) < 1e-12) return i;
  }
  throw std::invalid_argument("uniaxial local-field correction needs the axis along x, y or z");
}

}  // namespace

LocalFieldTensor::LocalFieldTensor(double l1, double l2, double l3) : l_(l1, l2, l3) {
  if (!l_.allFinite()) throw std::invalid_argument("local-field factors must be finite");
}

AdjustedDipole adjust_dipole(const LocalFieldTensor& l, const Direction& dipole) {
  const Vec3 adjusted = l.diagonal().cwiseProduct(dipole.vec());
  const double magnitude = adjusted.norm();
  if (magnitude < 1e-14) throw DegenerateAdjustedDipole();
  return AdjustedDipole{Direction::normalized(adjusted), magnitude};
}

RateResult rate_uniaxial_local(const UniaxialMedium& m, const DipoleSplit& d,
                               const LocalFieldTensor& l) {
  const int a = aligned_axis(m.axis());
  const double l_par = l[a];
  const double l_perp = l[(a + 1) % 3];
  const double l_other = l[(a + 2) % 3];
  if (std::abs(l_perp * l_perp - l_other * l_other) > 1e-12 * std::max(1.0, l_perp * l_perp)) {
    throw std::invalid_argument("local-field factors differ across the transverse plane");
  }
  // Scale each branch contribution component-wise: d_perp^2 -> L2^2 d_perp^2,
  // d_par^2 -> L1^2 d_par^2.
  const DipoleSplit perp_only = DipoleSplit::perpendicular();
  const DipoleSplit par_only = DipoleSplit::parallel();
  const double w_perp = l_perp * l_perp * d.d_perp() * d.d_perp();
  const double w_par = l_par * l_par * d.d_par() * d.d_par();

  RateResult r;
  r.method = MethodTag::closed_form;
  r.branches[0] = {"ordinary", w_perp * rate_ordinary(m, perp_only) + w_par * rate_ordinary(m, par_only)};
  r.branches[1] = {"extraordinary",
                   w_perp * rate_extraordinary(m, perp_only) + w_par * rate_extraordinary(m, par_only)};
  r.gamma_normalized = r.branches[0].gamma + r.branches[1].gamma;
  return r;
}

RateResult rate_biaxial_local(const PermittivityTensor& eps, const Direction& dipole,
                              const LocalFieldTensor& l, const QuadratureSpec& spec) {
  std::array<RateResult, 3> per_axis;
  std::array<double, 3> weights{};
  for (int i = 0; i < 3; ++i) {
    weights[i] = dipole[i] * dipole[i] * l[i] * l[i];
    if (weights[i] != 0.0) per_axis[i] = rate_numeric(eps, Direction::axis(i), spec);
  }
  if (weights[0] + weights[1] + weights[2] < 1e-28) throw DegenerateAdjustedDipole();
  return combine_axis_rates(per_axis, weights);
}

}  // namespace aniso
