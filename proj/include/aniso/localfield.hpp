#pragma once

// Local-field corrections E_loc = L E with L diagonal in crystal axes. The
// correction acts on the dipole instead of the field: |d . L E|^2 =
// |(L^T d) . E|^2, so every rate formula applies to the adjusted dipole
// L^T d.

#include <stdexcept>

#include "aniso/biaxial.hpp"
#include "aniso/media.hpp"
#include "aniso/uniaxial.hpp"

namespace aniso {

class DegenerateAdjustedDipole : public std::domain_error {
 public:
  DegenerateAdjustedDipole() : std::domain_error("local-field correction suppresses the dipole") {}
};

class LocalFieldTensor {
 public:
  /// Throws std::invalid_argument for non-finite entries. Signs are free;
  /// only squares enter the rates.
  LocalFieldTensor(double l1, double l2, double l3);
  static LocalFieldTensor identity() { return {1.0, 1.0, 1.0}; }
  static LocalFieldTensor scalar(double c) { return {c, c, c}; }

  double operator[](int i) const { return l_[i]; }
  const Vec3& diagonal() const { return l_; }
  bool has_zero_entry() const { return (l_.array() == 0.0).any(); }

 private:
  Vec3 l_;
};

struct AdjustedDipole {
  Direction direction;
  double magnitude;  // |L^T d|
};

/// L^T d split into direction and magnitude. Throws DegenerateAdjustedDipole
/// when |L^T d| < 1e-14.
AdjustedDipole adjust_dipole(const LocalFieldTensor& l, const Direction& dipole);

/// Uniaxial closed form with L_1 along the distinguished axis and L_2 in the
/// transverse plane. The medium axis must be a crystal axis and L must be
/// equal on the two transverse axes (std::invalid_argument otherwise).
RateResult rate_uniaxial_local(const UniaxialMedium& m, const DipoleSplit& d,
                               const LocalFieldTensor& l);

/// sum_i d_i^2 L_i^2 Gamma_i with Gamma_i the quadrature rate along axis i.
RateResult rate_biaxial_local(const PermittivityTensor& eps, const Direction& dipole,
                              const LocalFieldTensor& l,
                              const QuadratureSpec& spec = default_rate_spec());

}  // namespace aniso
