#pragma once

// Decay rate from the imaginary part of the dyadic Green's function at
// coincident points. The Green's function is expanded over the eigenvectors
// of the wave operator (two transverse branches plus kappa itself with zero
// frequency); the delta function from Im 1/(omega_k^2 - omega^2 - i0) puts
// every transverse branch on shell, leaving an angular integral of
//
//   T(kappa) = sum_{transverse} n^3 e (x) e / (e . eps e).
//
// T is assembled here as a matrix function of the symmetrized wave operator
// A = eps^{-1/2} (1 - kappa kappa^T) eps^{-1/2}, without computing any
// eigenvector, so this route shares no code with the Fermi-rule integrand in
// biaxial.hpp and can serve as an independent check of it.

#include "aniso/media.hpp"
#include "aniso/quadrature.hpp"

namespace aniso {

struct GreensModeSum {
  PermittivityTensor eps;
  bool includes_longitudinal = false;  // diagnostic; the soft-photon channel is zero for real eps

  /// T(kappa), normalized so that 3/(8 pi) * Integral d.T.d dOmega = Gamma.
  Mat3 transverse_kernel(const Direction& kappa) const;
};

struct GreensRate {
  double gamma_normalized;
  QuadratureResult quadrature;
};

/// d . Im G . d expressed as Gamma. Throws ToleranceNotReached.
GreensRate imag_greens_trace(const PermittivityTensor& eps, const Direction& dipole,
                             const QuadratureSpec& spec);

/// sum_{lambda=0,1,2} e (x) e / (e . eps e) - eps^{-1} with e_0 = kappa and
/// the transverse branches from solve_modes. Vanishes identically.
Mat3 completeness_defect(const PermittivityTensor& eps, const Direction& kappa);

/// Imaginary part of the longitudinal (zero-frequency) channel. Its kernel
/// -kappa (x) kappa / (omega^2 kappa . eps kappa) is real for real eps, so
/// this is exactly 0.
double longitudinal_contribution(const PermittivityTensor& eps);

}  // namespace aniso
