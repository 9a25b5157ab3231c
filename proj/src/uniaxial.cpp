#include "aniso/uniaxial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aniso {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(std::string(what) + " must be finite and positive");
  }
}

// Maximizer of a unimodal g on [lo, hi].
template <typename G>
double golden_section_argmax(G&& g, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > tol) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

UniaxialMedium::UniaxialMedium(double eps1, double eps2, Direction axis)
    : eps1_(eps1), eps2_(eps2), axis_(axis) {
  require_positive(eps1, "eps1");
  require_positive(eps2, "eps2");
}

UniaxialMedium UniaxialMedium::from_tensor(const PermittivityTensor& eps) {
  if (eps.kind() == MediumKind::biaxial) {
    throw std::invalid_argument("medium is biaxial, not uniaxial");
  }
  const int a = eps.distinguished_axis();
  const double eps2 = 0.5 * (eps[(a + 1) % 3] + eps[(a + 2) % 3]);
  return UniaxialMedium(eps[a], eps2, Direction::axis(a));
}

DipoleSplit::DipoleSplit(double d_par, double d_perp) : d_par_(d_par), d_perp_(d_perp) {
  if (!(d_par >= 0.0) || !(d_perp >= 0.0)) {
    throw std::invalid_argument("dipole split components must be non-negative");
  }
  if (std::abs(d_par * d_par + d_perp * d_perp - 1.0) > 1e-12) {
    throw std::invalid_argument("dipole split must satisfy d_par^2 + d_perp^2 = 1");
  }
}

DipoleSplit DipoleSplit::at_angle(double alpha) {
  return DipoleSplit(std::abs(std::cos(alpha)), std::abs(std::sin(alpha)));
}

DipoleSplit split_dipole(const UniaxialMedium& m, const Direction& dipole) {
  const Vec3& axis = m.axis().vec();
  const double along = dipole.vec().dot(axis);
  const double across = (dipole.vec() - along * axis).norm();
  const double norm = std::hypot(along, across);
  return DipoleSplit(std::abs(along) / norm, across / norm);
}

void PhysicalContext::validate() const {
  require_positive(omega_a, "omega_a");
  require_positive(dipole_si, "dipole_si");
}

// Prefactor bookkeeping. In units of omega^3 mu0^{3/2} d^2 / hbar the
// ordinary rate carries 1/(4 pi) while gamma_vac carries 1/(3 pi), hence the
// 3/4 below. The extraordinary and total rates already come with 1/(3 pi).

double rate_ordinary(const UniaxialMedium& m, const DipoleSplit& d) {
  return 0.75 * std::sqrt(m.eps2()) * d.d_perp() * d.d_perp();
}

double rate_extraordinary(const UniaxialMedium& m, const DipoleSplit& d) {
  const double sqrt_eps2 = std::sqrt(m.eps2());
  return m.eps1() * d.d_perp() * d.d_perp() / (4.0 * sqrt_eps2) +
         sqrt_eps2 * d.d_par() * d.d_par();
}

RateResult rate_uniaxial_total(const UniaxialMedium& m, const DipoleSplit& d) {
  RateResult r;
  r.branches[0] = {"ordinary", rate_ordinary(m, d)};
  r.branches[1] = {"extraordinary", rate_extraordinary(m, d)};
  r.gamma_normalized = r.branches[0].gamma + r.branches[1].gamma;
  r.method = MethodTag::closed_form;
  return r;
}

double extraordinary_index(const UniaxialMedium& m, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return 1.0 / std::sqrt(c * c / m.eps2() + s * s / m.eps1());
}

double angular_distribution(const UniaxialMedium& m, double theta) {
  const double n_e = extraordinary_index(m, theta);
  const double s = std::sin(theta);
  return std::pow(n_e, 5) * s * s / (m.eps1() * m.eps1());
}

std::vector<double> peak_emission_angles(const UniaxialMedium& m) {
  const double r = m.ratio();
  std::vector<double> peaks;
  if (r > 5.0 / 3.0) {
    const double shift = std::acos(std::sqrt(2.0 / (3.0 * (r - 1.0))));
    peaks = {kPi / 2 - shift, kPi / 2 + shift};
  } else {
    peaks = {kPi / 2};
  }

  // f is unimodal on [pi/2, pi] and symmetric about pi/2.
  auto f = [&](double theta) { return angular_distribution(m, theta); };
  const double upper = golden_section_argmax(f, kPi / 2, kPi, 1e-10);
  const double numeric_shift = upper - kPi / 2;
  const double closed_shift = peaks.back() - kPi / 2;
  if (std::abs(numeric_shift - closed_shift) > 1e-3) {
    throw std::logic_error("peak angle does not match the numeric argmax of f(theta)");
  }
  return peaks;
}

double rate_random_orientation(const UniaxialMedium& m) {
  const double sqrt_eps2 = std::sqrt(m.eps2());
  return m.eps1() / (6.0 * sqrt_eps2) + 5.0 * sqrt_eps2 / 6.0;
}

double vacuum_rate(const PhysicalContext& ctx) {
  ctx.validate();
  constexpr double c = 299792458.0;           // m/s, exact
  constexpr double hbar = 1.054571817e-34;    // J s, exact
  constexpr double eps0 = 8.8541878128e-12;   // F/m
  const double w = ctx.omega_a;
  return w * w * w * ctx.dipole_si * ctx.dipole_si / (3.0 * kPi * eps0 * hbar * c * c * c);
}

double to_absolute_rate(const PhysicalContext& ctx, double gamma_normalized) {
  return gamma_normalized * vacuum_rate(ctx);
}

}  // namespace aniso
