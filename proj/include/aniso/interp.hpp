#pragma once

// Closed-form interpolation model for biaxial media.
//
// For a dipole along z the rate is known exactly at the two uniaxial limits
// eps_y = eps_x (gamma_a) and eps_y = eps_z (gamma_b). The model interpolates
// linearly between them once in eps_y and once in eps_x, and takes the mean
// of the two, which is symmetric under x <-> y.

#include <vector>

#include "aniso/media.hpp"
#include "aniso/quadrature.hpp"
#include "aniso/rate.hpp"

namespace aniso {

struct EndpointRates {
  double gamma_a;  // eps_y = eps_x: sqrt(eps_x)
  double gamma_b;  // eps_y = eps_z: (eps_x + 3 eps_z) / (4 sqrt(eps_z))
};

struct InterpBreakdown {
  double gamma_a;
  double gamma_b;
  double gamma_lin_x;
  double gamma_lin_y;
  double gamma_model;       // (gamma_lin_x + gamma_lin_y) / 2
  double gamma_index_form;  // same value from n_plus, n_minus, n_par
  double n_plus;            // (sqrt(eps_y) + sqrt(eps_x)) / 2
  double n_minus;           // (sqrt(eps_y) - sqrt(eps_x)) / 2
  double n_par;             // sqrt(eps_z)
};

// The functions below take the dipole along z.

EndpointRates endpoint_rates(const PermittivityTensor& eps);

/// Linear in eps_y between gamma_a and gamma_b.
double interp_linear_in_y(const PermittivityTensor& eps);

/// Mirror image of interp_linear_in_y under x <-> y.
double interp_linear_in_x(const PermittivityTensor& eps);

/// All intermediate quantities. Throws std::logic_error if the mean form and
/// the index form disagree by more than 1e-12 (relative).
InterpBreakdown interp_breakdown(const PermittivityTensor& eps);

/// Model rate for a dipole along crystal axis `axis`, by relabeling that axis
/// as z.
InterpBreakdown interp_breakdown_for_axis(const PermittivityTensor& eps, int axis);

/// Model rate for any dipole via dx^2 G_x + dy^2 G_y + dz^2 G_z. The branch
/// entries hold the contributions of the two one-sided interpolants (half
/// each), so they add up to the model value.
RateResult rate_model(const PermittivityTensor& eps, const Direction& dipole);

struct ModelErrorRow {
  PermittivityTensor eps;
  double gamma_numeric;
  double gamma_model;
  double rel_error;
  bool extrapolated;  // eps_y outside [min(eps_x, eps_z), max(eps_x, eps_z)]
  QuadratureResult quadrature;
};

struct ModelErrorReport {
  std::vector<ModelErrorRow> rows;
  double max_rel_error = 0.0;
  double mean_rel_error = 0.0;
};

/// Model against quadrature on every grid point. Rows keep grid order.
ModelErrorReport model_error_report(const std::vector<PermittivityTensor>& grid,
                                    const Direction& dipole, const QuadratureSpec& spec);

}  // namespace aniso
