#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "aniso/biaxial.hpp"
#include "aniso/greens.hpp"
#include "oracles.hpp"

using namespace aniso;
using std::numbers::pi;

TEST_CASE("anchor values") {
  const QuadratureSpec spec = default_rate_spec();
  const GreensRate iso = imag_greens_trace({4, 4, 4}, Direction::normalized(1, 1, 0), spec);
  CHECK(std::abs(iso.gamma_normalized - 2.0) <= 1e-10);
  const GreensRate uni = imag_greens_trace({1.5, 1.5, 5}, Direction::axis(2), spec);
  CHECK(oracle::rel(uni.gamma_normalized, std::sqrt(1.5)) <= 1e-10);
  const GreensRate bi = imag_greens_trace({2, 3, 4}, Direction::axis(0), spec);
  CHECK(oracle::rel(bi.gamma_normalized, rate_numeric({2, 3, 4}, Direction::axis(0)).gamma_normalized) <= 1e-9);
  CHECK(bi.quadrature.est_rel_error < 1e-10);
}

TEST_CASE("kernel matches the mode sum of the generalized eigen-solver") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Vec3 e = oracle::random_eps(rng);
    const Vec3 k = oracle::random_unit(rng);
    Mat3 ref = Mat3::Zero();
    for (const auto& m : oracle::modes(e, k)) {
      ref += std::pow(m.eps_eff, 1.5) * m.e * m.e.transpose() / m.e.dot(e.cwiseProduct(m.e));
    }
    const Mat3 t = GreensModeSum{PermittivityTensor(e)}.transverse_kernel(Direction(k));
    CHECK((t - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
    CHECK((t - t.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * t.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("routes agree on random inputs") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 15; ++i) {
    const PermittivityTensor eps(oracle::random_eps(rng));
    const Direction d(oracle::random_unit(rng));
    CHECK(oracle::rel(imag_greens_trace(eps, d, default_rate_spec()).gamma_normalized,
                      rate_numeric(eps, d).gamma_normalized) <= 1e-9);
  }
}

TEST_CASE("completeness") {
  const double iso = completeness_defect({2, 2, 2}, Direction::from_angles(0.4, 1.1)).cwiseAbs().maxCoeff();
  CHECK(iso <= 1e-13);
  // body diagonal of (2,3,4), the optic axis of (1,2,3) and a principal axis
  CHECK(completeness_defect({2, 3, 4}, Direction::normalized(1, 1, 1)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(completeness_defect({1, 2, 3}, Direction::normalized(std::sqrt(0.75), 0.0, 0.5))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  CHECK(completeness_defect({2, 3, 4}, Direction::axis(2)).cwiseAbs().maxCoeff() <= 1e-12);

  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const PermittivityTensor eps(oracle::random_eps(rng));
    CHECK(completeness_defect(eps, Direction(oracle::random_unit(rng))).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("longitudinal channel vanishes") {
  CHECK(longitudinal_contribution({1, 2, 3}) == 0.0);
  CHECK(longitudinal_contribution({4, 4, 4}) == 0.0);
}

TEST_CASE("ToleranceNotReached from the Green's route") {
  CHECK_THROWS_AS(imag_greens_trace({0.5, 3, 8}, Direction::axis(2), {4, 8, 1e-14, 8}), ToleranceNotReached);
}
