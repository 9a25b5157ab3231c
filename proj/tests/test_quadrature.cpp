#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aniso/biaxial.hpp"
#include "aniso/quadrature.hpp"
#include "oracles.hpp"

using namespace aniso;
using std::numbers::pi;

namespace {

double real_ylm(int l, int m, double theta, double phi) {
  const int am = std::abs(m);
  double norm = (2.0 * l + 1.0) / (4.0 * pi);
  for (int i = l - am + 1; i <= l + am; ++i) norm /= i;
  norm = std::sqrt(norm);
  const double p = std::assoc_legendre(l, am, std::cos(theta));
  if (m == 0) return norm * p;
  return std::numbers::sqrt2 * norm * p * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

}  // namespace

TEST_CASE("Gauss-Legendre nodes and weights") {
  const GaussLegendreRule r2 = gauss_legendre(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
  const GaussLegendreRule r3 = gauss_legendre(3);
  CHECK(std::abs(r3.nodes[1]) < 1e-16);
  CHECK(r3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(r3.nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));

  for (int n : {5, 16, 64, 257, 1024}) {
    const GaussLegendreRule r = gauss_legendre(n);
    const oracle::Rule ref = oracle::golub_welsch(std::min(n, 257));
    if (n <= 257) {
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(r.nodes[i] - ref.x[i]) < 1e-14);
        CHECK(std::abs(r.weights[i] - ref.w[i]) < 1e-14);
      }
    }
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::is_sorted(r.nodes.begin(), r.nodes.end()));
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("polynomials up to degree 2n-1 are exact") {
  const GaussLegendreRule r = gauss_legendre(8);
  for (int p = 0; p <= 15; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    CHECK(std::abs(s - exact) < 1e-15);
  }
}

TEST_CASE("sphere integrals of simple functions") {
  const QuadratureResult one = integrate_sphere([](double, double) { return 1.0; });
  CHECK(std::abs(one.value - 4.0 * pi) < 1e-13);
  const QuadratureResult s2 = integrate_sphere([](double t, double) { return std::sin(t) * std::sin(t); });
  CHECK(std::abs(s2.value - 8.0 * pi / 3.0) < 1e-12);
  // theta is the angle from x
  const QuadratureResult x2 = integrate_directions([](const Direction& k) { return k.x() * k.x(); });
  CHECK(std::abs(x2.value - 4.0 * pi / 3.0) < 1e-13);
  CHECK(one.est_rel_error >= 0.0);
}

TEST_CASE("spherical harmonics are integrated exactly") {
  const int theta_rule = 12;
  const int phi_points = 24;
  for (int l = 0; l < theta_rule; ++l) {
    for (int m = -std::min(l, phi_points / 2 - 1); m <= std::min(l, phi_points / 2 - 1); ++m) {
      const double v = integrate_fixed(
          [&](const Direction& k) {
            return real_ylm(l, m, std::acos(std::clamp(k.x(), -1.0, 1.0)), std::atan2(k.z(), k.y()));
          },
          theta_rule, phi_points);
      CHECK(std::abs(v - (l == 0 ? std::sqrt(4.0 * pi) : 0.0)) <= 1e-13);
    }
  }
  // Orthonormality of products whose degree stays within the rule.
  for (int l1 = 0; l1 < 6; ++l1) {
    for (int l2 = 0; l2 < 6; ++l2) {
      const double v = integrate_fixed(
          [&](const Direction& k) {
            const double t = std::acos(std::clamp(k.x(), -1.0, 1.0));
            const double p = std::atan2(k.z(), k.y());
            return real_ylm(l1, 1, t, p) * real_ylm(l2, 1, t, p);
          },
          theta_rule, phi_points);
      if (l1 >= 1 && l2 >= 1) CHECK(std::abs(v - (l1 == l2 ? 1.0 : 0.0)) <= 1e-13);
    }
  }
}

TEST_CASE("quadrature is deterministic and refines monotonically") {
  const PermittivityTensor eps(0.5, 8.0, 3.0);
  const Direction d = Direction::normalized(1, 2, 3);
  const double a = rate_numeric(eps, d).gamma_normalized;
  const double b = rate_numeric(eps, d).gamma_normalized;
  CHECK(a == b);

  const RateResult coarse = rate_numeric(eps, d, {4, 8, 1e-12, 512});
  const auto& h = coarse.quadrature->error_history;
  REQUIRE(h.size() >= 3);
  CHECK(h[h.size() - 1] <= h[h.size() - 2]);
  CHECK(h[h.size() - 2] <= h[h.size() - 3]);
  CHECK(coarse.quadrature->theta_order == 4 << h.size());
}

TEST_CASE("ToleranceNotReached carries the best value") {
  const QuadratureSpec tight{4, 8, 1e-15, 16};
  try {
    integrate_directions([](const Direction& k) { return std::exp(3.0 * k.x()); }, tight);
    FAIL("expected ToleranceNotReached");
  } catch (const ToleranceNotReached& e) {
    CHECK(e.best().theta_order == 16);
    CHECK(e.best().phi_points == 32);
    CHECK(e.best().est_rel_error > 1e-15);
    // 4 pi sinh(3)/3
    CHECK(e.best().value == doctest::Approx(4.0 * pi * std::sinh(3.0) / 3.0).epsilon(1e-6));
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(integrate_sphere([](double, double) { return 1.0; }, {3, 8, 1e-10, 64}), std::invalid_argument);
  CHECK_THROWS_AS(integrate_sphere([](double, double) { return 1.0; }, {4, 9, 1e-10, 64}), std::invalid_argument);
  CHECK_THROWS_AS(integrate_sphere([](double, double) { return 1.0; }, {4, 8, 0.0, 64}), std::invalid_argument);
  CHECK_THROWS_AS(integrate_sphere([](double, double) { return 1.0; }, {64, 8, 1e-10, 32}), std::invalid_argument);
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);

  CompensatedSum t;
  for (int i = 0; i < 1000000; ++i) t.add(0.1);
  CHECK(std::abs(t.value() - 100000.0) < 1e-9);
}

TEST_CASE("split integrals add up") {
  const SplitQuadratureResult r = integrate_split([](const Direction& k) {
    return std::array<double, 2>{k.y() * k.y(), k.z() * k.z() + 1.0};
  });
  CHECK(std::abs(r.parts[0] - 4.0 * pi / 3.0) < 1e-13);
  CHECK(std::abs(r.parts[1] - 16.0 * pi / 3.0) < 1e-12);
  CHECK(std::abs(r.parts[0] + r.parts[1] - r.total.value) < 1e-13);
}
