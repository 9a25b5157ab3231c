#pragma once

// Emission rate of a dipole in a general (biaxial) medium by quadrature of
// the Fermi-rule integrand over wave directions:
//
//   Gamma = 3/(8 pi) * Integral dOmega  sum_branches
//             eps_eff^{3/2} |d . e|^2 / (e . eps e)
//
// which reduces to sqrt(eps) for an isotropic medium.

#include <array>

#include "aniso/media.hpp"
#include "aniso/quadrature.hpp"
#include "aniso/rate.hpp"

namespace aniso {

/// theta_rule 64, phi_points 128, target 1e-10, max order 2048.
QuadratureSpec default_rate_spec();

/// Per-branch integrand at wave direction kappa, in solve_modes order
/// (larger eps_eff first).
std::array<double, 2> rate_integrand_branches(const PermittivityTensor& eps,
                                              const Direction& dipole, const Direction& kappa);

/// Summed integrand at (theta, phi); theta is measured from the x axis.
double rate_integrand(const PermittivityTensor& eps, const Direction& dipole, double theta,
                      double phi);

/// Gamma by direct quadrature. Throws ToleranceNotReached.
RateResult rate_numeric(const PermittivityTensor& eps, const Direction& dipole,
                        const QuadratureSpec& spec = default_rate_spec());

/// Gamma for dipoles along x, y and z.
std::array<RateResult, 3> axis_rates(const PermittivityTensor& eps,
                                     const QuadratureSpec& spec = default_rate_spec());

/// Gamma = dx^2 Gamma_x + dy^2 Gamma_y + dz^2 Gamma_z. Mixed terms integrate
/// to zero, so this equals rate_numeric up to quadrature error.
RateResult rate_arbitrary_dipole(const PermittivityTensor& eps, const Direction& dipole,
                                 const QuadratureSpec& spec = default_rate_spec());

/// Weighted combination of per-axis results; weights multiply both the total
/// and the branch contributions. Quadrature diagnostics keep the worst axis.
RateResult combine_axis_rates(const std::array<RateResult, 3>& per_axis,
                              const std::array<double, 3>& weights);

}  // namespace aniso
