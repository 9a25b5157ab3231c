#pragma once

// Product Gauss-Legendre (in cos theta) x uniform-phi quadrature on the unit
// sphere with order doubling until a relative tolerance is met.
//
// Angles follow the wave-vector convention used across the library:
// kappa = (cos theta, sin theta cos phi, sin theta sin phi), so the polar
// axis of the grid is the crystal x axis.

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "aniso/media.hpp"

namespace aniso {

struct QuadratureSpec {
  int theta_rule = 64;           // Gauss-Legendre nodes in cos theta, >= 4
  int phi_points = 128;          // uniform phi nodes, even, >= 8
  double target_rel_tol = 1e-10;
  int max_order = 2048;          // cap on theta_rule during refinement

  /// Throws std::invalid_argument on a malformed spec.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double est_rel_error = 0.0;
  int theta_order = 0;  // orders of the grid that produced value
  int phi_points = 0;
  std::vector<double> error_history;  // est_rel_error after each doubling
};

/// Thrown when refinement hits max_order before target_rel_tol.
class ToleranceNotReached : public std::runtime_error {
 public:
  explicit ToleranceNotReached(QuadratureResult best);
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending on (-1, 1)
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on the three-term recurrence).
GaussLegendreRule gauss_legendre(int n);

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

using SphereIntegrand = std::function<double(double theta, double phi)>;
using DirectionIntegrand = std::function<double(const Direction& kappa)>;
/// Two-component integrand; refinement is driven by the sum of the components.
using SplitIntegrand = std::function<std::array<double, 2>(const Direction& kappa)>;

/// Integral of f(theta, phi) sin(theta) dtheta dphi over the sphere.
QuadratureResult integrate_sphere(const SphereIntegrand& f, const QuadratureSpec& spec = {});

/// Same as integrate_sphere but hands the integrand the unit direction.
QuadratureResult integrate_directions(const DirectionIntegrand& f, const QuadratureSpec& spec = {});

struct SplitQuadratureResult {
  QuadratureResult total;
  std::array<double, 2> parts{};  // on the grid of total; parts sum to total.value
};

SplitQuadratureResult integrate_split(const SplitIntegrand& f, const QuadratureSpec& spec = {});

/// Single evaluation on a fixed grid, no refinement.
double integrate_fixed(const DirectionIntegrand& f, int theta_rule, int phi_points);

}  // namespace aniso
