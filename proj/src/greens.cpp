#include "aniso/greens.hpp"

#include <cassert>
#include <cmath>
#include <complex>
#include <numbers>

namespace aniso {

Mat3 GreensModeSum::transverse_kernel(const Direction& kappa) const {
  const Vec3 s = eps.diagonal().cwiseSqrt().cwiseInverse();
  const Vec3& k = kappa.vec();
  const Mat3 a = s.asDiagonal() * (Mat3::Identity() - k * k.transpose()) * s.asDiagonal();

  // Nonzero eigenvalues of A (det A = 0): roots of l^2 - tr(A) l + c2.
  const double tr = a.trace();
  const double c2 = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1) + a(0, 0) * a(2, 2) -
                    a(0, 2) * a(0, 2) + a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2);
  const double l1 = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * c2)));
  const double l2 = c2 / l1;

  // f(l) = l^{-3/2} = n^3 on the transverse eigenvalues and 0 on the null
  // vector kappa, realized as p(A) = alpha A + beta A^2 with p(l_i) = f(l_i).
  // With g(l) = f(l)/l = l^{-5/2}, beta is the divided difference g[l1, l2]
  // and alpha = g(l1) - beta l1. Written in u = l^{-1/2} to stay exact when
  // l1 = l2.
  const double u = 1.0 / std::sqrt(l1);
  const double v = 1.0 / std::sqrt(l2);
  const double u2 = u * u;
  const double v2 = v * v;
  const double beta = -u2 * v2 * (u2 * u2 + u2 * u * v + u2 * v2 + u * v2 * v + v2 * v2) / (u + v);
  const double alpha = u2 * u2 * u - beta * l1;

  const Mat3 p = alpha * a + beta * (a * a);
  return s.asDiagonal() * p * s.asDiagonal();
}

GreensRate imag_greens_trace(const PermittivityTensor& eps, const Direction& dipole,
                             const QuadratureSpec& spec) {
  constexpr double scale = 3.0 / (8.0 * std::numbers::pi);
  const GreensModeSum sum{eps};
  const Vec3& d = dipole.vec();
  try {
    QuadratureResult q = integrate_directions(
        [&](const Direction& kappa) { return d.dot(sum.transverse_kernel(kappa) * d); }, spec);
    q.value *= scale;
    return GreensRate{q.value, q};
  } catch (ToleranceNotReached& e) {
    QuadratureResult best = e.best();
    best.value *= scale;
    throw ToleranceNotReached(best);
  }
}

Mat3 completeness_defect(const PermittivityTensor& eps, const Direction& kappa) {
  const ModePair modes = solve_modes(eps, kappa);
  const Vec3& k = kappa.vec();
  Mat3 sum = k * k.transpose() / eps.quadratic_form(k);
  for (int i = 0; i < 2; ++i) {
    const Vec3& e = modes[i].polarization.vec();
    sum += e * e.transpose() / eps.quadratic_form(e);
  }
  return sum - eps.inverse();
}

double longitudinal_contribution(const PermittivityTensor& eps) {
  // Trace of the soft-photon kernel, accumulated as a complex number on a
  // coarse grid; every term has zero imaginary part for real eps.
  const GaussLegendreRule rule = gauss_legendre(8);
  constexpr int n_phi = 16;
  std::complex<double> total{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double st = std::sqrt(1.0 - x * x);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * 2.0 * std::numbers::pi / n_phi;
      const Vec3 k(x, st * std::cos(phi), st * std::sin(phi));
      const std::complex<double> denom(eps.quadratic_form(k), 0.0);
      total -= rule.weights[i] * std::complex<double>(k.squaredNorm(), 0.0) / denom;
    }
  }
  assert(total.imag() == 0.0 && "real permittivity has no longitudinal decay channel");
  return total.imag();
}

}  // namespace aniso
