#include "aniso/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aniso/biaxial.hpp"

namespace aniso {

EndpointRates endpoint_rates(const PermittivityTensor& eps) {
  const double sz = std::sqrt(eps.z());
  return {std::sqrt(eps.x()), (eps.x() + 3.0 * eps.z()) / (4.0 * sz)};
}

double interp_linear_in_y(const PermittivityTensor& eps) {
  const double sx = std::sqrt(eps.x());
  const double sz = std::sqrt(eps.z());
  const double dy = eps.y() - eps.x();
  return sx - dy / (4.0 * sz) + dy / (sx + sz);
}

double interp_linear_in_x(const PermittivityTensor& eps) {
  const double sy = std::sqrt(eps.y());
  const double sz = std::sqrt(eps.z());
  const double dy = eps.y() - eps.x();
  return sy + dy / (4.0 * sz) - dy / (sy + sz);
}

InterpBreakdown interp_breakdown(const PermittivityTensor& eps) {
  const auto [gamma_a, gamma_b] = endpoint_rates(eps);
  InterpBreakdown b{};
  b.gamma_a = gamma_a;
  b.gamma_b = gamma_b;
  b.gamma_lin_x = interp_linear_in_x(eps);
  b.gamma_lin_y = interp_linear_in_y(eps);
  b.gamma_model = 0.5 * (b.gamma_lin_x + b.gamma_lin_y);

  const double sx = std::sqrt(eps.x());
  const double sy = std::sqrt(eps.y());
  b.n_plus = 0.5 * (sy + sx);
  b.n_minus = 0.5 * (sy - sx);
  b.n_par = std::sqrt(eps.z());
  const double sum2 = (b.n_plus + b.n_par) * (b.n_plus + b.n_par);
  const double m2 = b.n_minus * b.n_minus;
  b.gamma_index_form = b.n_plus * (sum2 + 3.0 * m2) / (sum2 - m2);

  if (std::abs(b.gamma_index_form - b.gamma_model) > 1e-12 * b.gamma_model) {
    throw std::logic_error("interpolation model: mean and index forms disagree");
  }
  return b;
}

InterpBreakdown interp_breakdown_for_axis(const PermittivityTensor& eps, int axis) {
  switch (axis) {
    case 0: return interp_breakdown(eps.permuted({1, 2, 0}));
    case 1: return interp_breakdown(eps.permuted({0, 2, 1}));
    case 2: return interp_breakdown(eps);
    default: throw std::invalid_argument("axis index must be 0, 1 or 2");
  }
}

RateResult rate_model(const PermittivityTensor& eps, const Direction& dipole) {
  RateResult r;
  r.method = MethodTag::interpolation_model;
  r.branches[0] = {"linear_in_x", 0.0};
  r.branches[1] = {"linear_in_y", 0.0};
  for (int i = 0; i < 3; ++i) {
    const double w = dipole[i] * dipole[i];
    if (w == 0.0) continue;
    const InterpBreakdown b = interp_breakdown_for_axis(eps, i);
    r.branches[0].gamma += 0.5 * w * b.gamma_lin_x;
    r.branches[1].gamma += 0.5 * w * b.gamma_lin_y;
  }
  r.gamma_normalized = r.branches[0].gamma + r.branches[1].gamma;
  return r;
}

ModelErrorReport model_error_report(const std::vector<PermittivityTensor>& grid,
                                    const Direction& dipole, const QuadratureSpec& spec) {
  ModelErrorReport report;
  report.rows.reserve(grid.size());
  double sum = 0.0;
  for (const PermittivityTensor& eps : grid) {
    const RateResult numeric = rate_numeric(eps, dipole, spec);
    const double model = rate_model(eps, dipole).gamma_normalized;
    const double rel = std::abs(model - numeric.gamma_normalized) / numeric.gamma_normalized;
    const double lo = std::min(eps.x(), eps.z());
    const double hi = std::max(eps.x(), eps.z());
    report.rows.push_back(ModelErrorRow{eps, numeric.gamma_normalized, model, rel,
                                        eps.y() < lo || eps.y() > hi, *numeric.quadrature});
    report.max_rel_error = std::max(report.max_rel_error, rel);
    sum += rel;
  }
  if (!report.rows.empty()) report.mean_rel_error = sum / static_cast<double>(report.rows.size());
  return report;
}

}  // namespace aniso
