#pragma once

// Closed-form emission rates in uniaxial media.
//
// The medium is eps = diag(eps1, eps2, eps2) with the distinguished axis
// along x; other orientations are mapped onto this one by the caller (see
// split_dipole and UniaxialMedium::from_tensor). All rates are normalized to
// the vacuum rate gamma_vac = omega^3 d^2 / (3 pi eps0 hbar c^3).

#include <vector>

#include "aniso/media.hpp"
#include "aniso/rate.hpp"

namespace aniso {

class UniaxialMedium {
 public:
  /// Throws std::invalid_argument unless eps1, eps2 are finite and > 0.
  UniaxialMedium(double eps1, double eps2, Direction axis = Direction::axis(0));

  /// Reads eps1/eps2 and the axis from a uniaxial or isotropic tensor.
  /// Throws std::invalid_argument for biaxial tensors.
  static UniaxialMedium from_tensor(const PermittivityTensor& eps);

  double eps1() const { return eps1_; }
  double eps2() const { return eps2_; }
  const Direction& axis() const { return axis_; }
  /// r = eps2 / eps1
  double ratio() const { return eps2_ / eps1_; }

 private:
  double eps1_;
  double eps2_;
  Direction axis_;
};

/// Dipole components along (d_par) and across (d_perp) the distinguished axis,
/// with d_par^2 + d_perp^2 = 1.
class DipoleSplit {
 public:
  /// Throws std::invalid_argument for negative entries or a squared norm
  /// away from 1 by more than 1e-12.
  DipoleSplit(double d_par, double d_perp);

  static DipoleSplit parallel() { return {1.0, 0.0}; }
  static DipoleSplit perpendicular() { return {0.0, 1.0}; }
  /// Dipole at angle alpha from the distinguished axis.
  static DipoleSplit at_angle(double alpha);

  double d_par() const { return d_par_; }
  double d_perp() const { return d_perp_; }

 private:
  double d_par_;
  double d_perp_;
};

DipoleSplit split_dipole(const UniaxialMedium& m, const Direction& dipole);

struct PhysicalContext {
  double omega_a;    // transition angular frequency, rad/s
  double dipole_si;  // dipole moment, C m

  /// Throws std::invalid_argument unless both are finite and > 0.
  void validate() const;
};

/// Ordinary-wave part of the normalized rate.
double rate_ordinary(const UniaxialMedium& m, const DipoleSplit& d);

/// Extraordinary-wave part of the normalized rate.
double rate_extraordinary(const UniaxialMedium& m, const DipoleSplit& d);

/// Total normalized rate with the ordinary/extraordinary breakdown.
RateResult rate_uniaxial_total(const UniaxialMedium& m, const DipoleSplit& d);

/// n_e(theta) with theta measured from the distinguished axis.
double extraordinary_index(const UniaxialMedium& m, double theta);

/// Angular emission profile f(theta) = n_e(theta)^5 sin^2(theta) / eps1^2 for
/// a dipole along the distinguished axis; (3/4) * int f sin(theta) dtheta is
/// its normalized rate.
double angular_distribution(const UniaxialMedium& m, double theta);

/// Polar angles of maximal emission for the axis-parallel dipole: pi/2 +- dtheta
/// when eps2/eps1 > 5/3, otherwise pi/2 alone. Each angle is checked against a
/// numeric argmax of f; std::logic_error if the two disagree by > 1e-3 rad.
std::vector<double> peak_emission_angles(const UniaxialMedium& m);

/// Rate averaged over isotropically distributed dipole orientations.
double rate_random_orientation(const UniaxialMedium& m);

/// gamma_vac in 1/s for the given transition (CODATA 2018 constants).
double vacuum_rate(const PhysicalContext& ctx);

/// Gamma * gamma_vac in 1/s.
double to_absolute_rate(const PhysicalContext& ctx, double gamma_normalized);

}  // namespace aniso
