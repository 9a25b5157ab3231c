#include "aniso/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "aniso/biaxial.hpp"
#include "aniso/greens.hpp"
#include "aniso/interp.hpp"
#include "aniso/localfield.hpp"
#include "aniso/uniaxial.hpp"

namespace aniso {

namespace {

using Rng = std::mt19937_64;

class Check {
 public:
  Check(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }
  void record(double defect) {
    ++result_.samples;
    if (!(defect <= result_.worst_defect)) result_.worst_defect = defect;  // NaN sticks
  }
  CheckResult finish() {
    result_.passed = result_.samples > 0 && result_.worst_defect <= result_.tolerance;
    return result_;
  }

 private:
  CheckResult result_;
};

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Direction random_direction(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const Vec3 v(n(rng), n(rng), n(rng));
    if (v.norm() > 1e-3) return Direction::normalized(v);
  }
}

PermittivityTensor random_biaxial(Rng& rng, double lo = 0.5, double hi = 8.0) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

// Every fourth sample is uniaxial with a random distinguished axis.
PermittivityTensor random_medium(Rng& rng, std::size_t i) {
  if (i % 4 != 3) return random_biaxial(rng);
  const double e1 = uniform(rng, 0.5, 8.0);
  const double e2 = uniform(rng, 0.5, 8.0);
  Vec3 d(e2, e2, e2);
  d[static_cast<int>(i / 4 % 3)] = e1;
  return PermittivityTensor(d);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

// Real orthonormal spherical harmonic in the grid's own polar angle.
double real_ylm(int l, int m, double theta, double phi) {
  const int am = std::abs(m);
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) *
                                std::exp(std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0)));
  const double p = std::assoc_legendre(l, am, std::cos(theta));
  if (m == 0) return norm * p;
  if (m > 0) return std::numbers::sqrt2 * norm * p * std::cos(am * phi);
  return std::numbers::sqrt2 * norm * p * std::sin(am * phi);
}

constexpr std::size_t kPropertySamples = 1000;

// --- core-media -----------------------------------------------------------

void media_checks(Rng& rng, std::vector<CheckResult>& out, bool fault) {
  Check rank("media.rank_le_2", 1e-12);
  Check reciprocity("media.reciprocity", 1e-12);
  Check gauss("media.gauss_constraint", 1e-12);
  Check orthogonality("media.eps_orthogonality", 1e-12);
  Check magnetic("media.magnetic_identity", 1e-12);
  Check closed("media.closed_form_vs_numeric", 1e-10);

  for (std::size_t i = 0; i < kPropertySamples; ++i) {
    const PermittivityTensor eps = random_medium(rng, i);
    const Direction kappa = random_direction(rng);
    const Vec3& k = kappa.vec();

    const Eigen::Vector3cd lambda = Eigen::EigenSolver<Mat3>(build_wave_matrix(eps, kappa)).eigenvalues();
    Eigen::Vector3d mags = lambda.cwiseAbs();
    std::sort(mags.data(), mags.data() + 3);
    rank.record(mags[0] / mags[2]);

    const ModePair modes = solve_modes(eps, kappa);
    const ModePair back = solve_modes(eps, -kappa);
    double recip = 0.0;
    for (int b = 0; b < 2; ++b) {
      recip = std::max(recip, rel(back[b].eps_eff, modes[b].eps_eff));
      if (!modes.degenerate) {
        recip = std::max(recip, modes[b].polarization.vec().cross(back[b].polarization.vec()).norm());
      }
    }
    reciprocity.record(recip);

    double gauss_defect = 0.0;
    for (int b = 0; b < 2; ++b) {
      gauss_defect = std::max(gauss_defect, std::abs(k.dot(eps.diagonal().cwiseProduct(modes[b].polarization.vec()))));
    }
    gauss.record(fault ? gauss_defect + 1.0 : gauss_defect);

    const Vec3& e1 = modes[0].polarization.vec();
    const Vec3& e2 = modes[1].polarization.vec();
    if (rel(modes[1].eps_eff, modes[0].eps_eff) > 1e-9) {
      orthogonality.record(std::abs(e1.dot(eps.diagonal().cwiseProduct(e2))));
    }

    double mag = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Vec3& ea = modes[a].polarization.vec();
        const Vec3& eb = modes[b].polarization.vec();
        const double lhs = k.cross(ea).dot(k.cross(eb));
        const double rhs = ea.dot(eps.diagonal().cwiseProduct(eb)) / (modes[a].n_eff * modes[b].n_eff);
        mag = std::max(mag, std::abs(lhs - rhs));
      }
    }
    magnetic.record(mag);

    // re[0] is the null eigenvalue; re[1] = 1/eps_eff of the first (larger) branch.
    Eigen::Vector3d re = lambda.real();
    std::sort(re.data(), re.data() + 3);
    double cf = 0.0;
    for (int b = 0; b < 2; ++b) cf = std::max(cf, rel(modes[b].eps_eff, 1.0 / re[b + 1]));
    closed.record(cf);
  }

  for (Check* c : {&rank, &reciprocity, &gauss, &orthogonality, &magnetic, &closed}) {
    out.push_back(c->finish());
  }
}

// --- sphere-quadrature ----------------------------------------------------

void quadrature_checks(Rng& rng, std::vector<CheckResult>& out) {
  {
    Check exact("quadrature.spherical_harmonic_exactness", 1e-13);
    constexpr int theta_rule = 16;
    constexpr int phi_points = 32;
    for (int l = 0; l < theta_rule; ++l) {
      for (int m = -std::min(l, phi_points / 2 - 1); m <= std::min(l, phi_points / 2 - 1); ++m) {
        const double value = integrate_fixed(
            [&](const Direction& k) {
              const double theta = std::acos(std::clamp(k.x(), -1.0, 1.0));
              const double phi = std::atan2(k.z(), k.y());
              return real_ylm(l, m, theta, phi);
            },
            theta_rule, phi_points);
        const double expected = (l == 0) ? std::sqrt(4.0 * std::numbers::pi) : 0.0;
        exact.record(std::abs(value - expected));
      }
    }
    out.push_back(exact.finish());
  }

  const PermittivityTensor eps = random_biaxial(rng);
  const Direction d = random_direction(rng);
  {
    Check det("quadrature.determinism", 0.0);
    const double a = rate_numeric(eps, d).gamma_normalized;
    const double b = rate_numeric(eps, d).gamma_normalized;
    det.record(a == b ? 0.0 : std::abs(a - b));
    out.push_back(det.finish());
  }
  {
    Check mono("quadrature.monotone_refinement", 0.0);
    const QuadratureSpec coarse{4, 8, 1e-12, 256};
    const QuadratureResult q = rate_numeric(eps, d, coarse).quadrature.value();
    const auto& h = q.error_history;
    mono.record(h.size() >= 3 && h[h.size() - 1] <= h[h.size() - 2] && h[h.size() - 2] <= h[h.size() - 3]
                    ? 0.0
                    : 1.0);
    out.push_back(mono.finish());
  }
}

// --- uniaxial-analytic ----------------------------------------------------

void uniaxial_checks(Rng& rng, std::vector<CheckResult>& out) {
  Check decomposition("uniaxial.decomposition", 1e-14);
  Check isotropic("uniaxial.isotropic_limit", 1e-12);
  for (std::size_t i = 0; i < kPropertySamples; ++i) {
    const UniaxialMedium m(uniform(rng, 0.5, 8.0), uniform(rng, 0.5, 8.0));
    const DipoleSplit d = DipoleSplit::at_angle(uniform(rng, 0.0, std::numbers::pi / 2));
    const RateResult r = rate_uniaxial_total(m, d);
    decomposition.record(std::abs(r.gamma_normalized - (rate_ordinary(m, d) + rate_extraordinary(m, d))));

    const double e = m.eps1();
    isotropic.record(rel(rate_uniaxial_total(UniaxialMedium(e, e), d).gamma_normalized, std::sqrt(e)));
  }
  out.push_back(decomposition.finish());
  out.push_back(isotropic.finish());

  Check equivalence("uniaxial.quadrature_equivalence", 1e-8);
  const std::array<double, 6> values{0.5, 1.0, 1.5, 2.0, 5.0, 7.0};
  for (double e1 : values) {
    for (double e2 : values) {
      const UniaxialMedium m(e1, e2);
      const PermittivityTensor eps(e1, e2, e2);
      for (double alpha : {0.0, std::numbers::pi / 2, std::numbers::pi / 4}) {
        const DipoleSplit d = DipoleSplit::at_angle(alpha);
        const Direction dir(d.d_par(), d.d_perp(), 0.0);
        equivalence.record(
            rel(rate_numeric(eps, dir).gamma_normalized, rate_uniaxial_total(m, d).gamma_normalized));
      }
    }
  }
  out.push_back(equivalence.finish());

  Check shape("uniaxial.angular_shape_invariance", 1e-12);
  const GaussLegendreRule rule = gauss_legendre(200);
  auto normalizer = [&](const UniaxialMedium& m) {
    CompensatedSum s;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double theta = std::acos(rule.nodes[j]);
      s.add(rule.weights[j] * angular_distribution(m, theta));
    }
    return s.value();
  };
  for (int i = 0; i < 20; ++i) {
    const UniaxialMedium base(uniform(rng, 0.5, 8.0), uniform(rng, 0.5, 8.0));
    const double base_norm = normalizer(base);
    for (double c : {0.5, 2.0, 3.0}) {
      const UniaxialMedium scaled(c * base.eps1(), c * base.eps2());
      const double scaled_norm = normalizer(scaled);
      double worst = 0.0;
      for (int j = 0; j <= 64; ++j) {
        const double theta = std::numbers::pi * j / 64.0;
        worst = std::max(worst, std::abs(angular_distribution(base, theta) / base_norm -
                                         angular_distribution(scaled, theta) / scaled_norm));
      }
      shape.record(worst);
    }
  }
  out.push_back(shape.finish());

  Check peaks("uniaxial.peak_angles", 1e-3);
  for (double r : {1.0, 1.5, 2.0, 3.0, 5.0, 7.0}) {
    const UniaxialMedium m(1.0, r);
    const std::vector<double> got = peak_emission_angles(m);
    if (r <= 5.0 / 3.0) {
      peaks.record(got.size() == 1 ? std::abs(got[0] - std::numbers::pi / 2) : 1.0);
    } else {
      const double dt = std::acos(std::sqrt(2.0 / (3.0 * (r - 1.0))));
      peaks.record(got.size() == 2 ? std::max(std::abs(got[0] - (std::numbers::pi / 2 - dt)),
                                              std::abs(got[1] - (std::numbers::pi / 2 + dt)))
                                   : 1.0);
    }
  }
  out.push_back(peaks.finish());
}

// --- biaxial-numeric ------------------------------------------------------

void biaxial_checks(Rng& rng, std::vector<CheckResult>& out) {
  Check cross("biaxial.cross_term_cancellation", 1e-8);
  for (int i = 0; i < 200; ++i) {
    const PermittivityTensor eps = random_biaxial(rng);
    const Direction d = random_direction(rng);
    cross.record(rel(rate_numeric(eps, d).gamma_normalized,
                     rate_arbitrary_dipole(eps, d).gamma_normalized));
  }
  out.push_back(cross.finish());

  Check relabel("biaxial.axis_relabeling", 1e-12);
  const std::array<std::array<int, 3>, 5> orders{{{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int i = 0; i < 10; ++i) {
    const PermittivityTensor eps = random_biaxial(rng);
    const Direction d = random_direction(rng);
    const double base = rate_numeric(eps, d).gamma_normalized;
    for (const auto& o : orders) {
      const Direction pd(d[o[0]], d[o[1]], d[o[2]]);
      relabel.record(rel(rate_numeric(eps.permuted(o), pd).gamma_normalized, base));
    }
  }
  out.push_back(relabel.finish());

  Check reduction("biaxial.uniaxial_reduction", 1e-8);
  for (int i = 0; i < 6; ++i) {
    const double e1 = uniform(rng, 0.5, 8.0);
    const double e2 = uniform(rng, 0.5, 8.0);
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 diag(e2, e2, e2);
      diag[axis] = e1;
      const PermittivityTensor eps(diag);
      const Direction d = random_direction(rng);
      const UniaxialMedium m(e1, e2, Direction::axis(axis));
      reduction.record(rel(rate_numeric(eps, d).gamma_normalized,
                           rate_uniaxial_total(m, split_dipole(m, d)).gamma_normalized));
    }
  }
  out.push_back(reduction.finish());

  Check scaling("biaxial.positivity_and_scaling", 1e-10);
  for (int i = 0; i < 10; ++i) {
    const PermittivityTensor eps = random_biaxial(rng);
    const Direction d = random_direction(rng);
    const double c = uniform(rng, 0.25, 4.0);
    const double g = rate_numeric(eps, d).gamma_normalized;
    const PermittivityTensor scaled(c * eps.diagonal());
    const double gc = rate_numeric(scaled, d).gamma_normalized;
    scaling.record(g > 0.0 && gc > 0.0 ? rel(gc, std::sqrt(c) * g) : 1.0);
  }
  out.push_back(scaling.finish());
}

// --- interp-model ---------------------------------------------------------

void interp_checks(Rng& rng, std::vector<CheckResult>& out) {
  Check symmetry("interp.xy_symmetry", 1e-14);
  Check forms("interp.form_equivalence", 1e-12);
  Check mean("interp.mean_construction", 1e-14);
  Check endpoints("interp.endpoint_exactness", 1e-12);
  for (std::size_t i = 0; i < kPropertySamples; ++i) {
    const double ex = uniform(rng, 0.5, 8.0);
    const double ey = uniform(rng, 0.5, 8.0);
    const double ez = uniform(rng, 0.5, 8.0);
    const InterpBreakdown b = interp_breakdown({ex, ey, ez});
    const InterpBreakdown s = interp_breakdown({ey, ex, ez});
    symmetry.record(rel(s.gamma_model, b.gamma_model));
    forms.record(rel(b.gamma_index_form, b.gamma_model));
    mean.record(rel(b.gamma_model, 0.5 * (b.gamma_lin_x + b.gamma_lin_y)));

    const UniaxialMedium at_a(ez, ex);  // eps_y = eps_x: z is the distinguished axis
    const UniaxialMedium at_b(ex, ez);  // eps_y = eps_z: x is the distinguished axis
    endpoints.record(std::max(
        rel(interp_breakdown({ex, ex, ez}).gamma_model,
            rate_uniaxial_total(at_a, DipoleSplit::parallel()).gamma_normalized),
        rel(interp_breakdown({ex, ez, ez}).gamma_model,
            rate_uniaxial_total(at_b, DipoleSplit::perpendicular()).gamma_normalized)));
  }
  for (Check* c : {&symmetry, &forms, &mean, &endpoints}) out.push_back(c->finish());
}

// --- greens-check ---------------------------------------------------------

void greens_checks(Rng& rng, std::vector<CheckResult>& out) {
  Check routes("greens.route_equivalence", 1e-9);
  for (int i = 0; i < 50; ++i) {
    const PermittivityTensor eps = random_biaxial(rng);
    const Direction d = random_direction(rng);
    routes.record(rel(imag_greens_trace(eps, d, default_rate_spec()).gamma_normalized,
                      rate_numeric(eps, d).gamma_normalized));
  }
  out.push_back(routes.finish());

  Check completeness("greens.completeness", 1e-12);
  Check longitudinal("greens.longitudinal_nullity", 0.0);
  for (int i = 0; i < 20; ++i) {
    const PermittivityTensor eps = random_medium(rng, static_cast<std::size_t>(i));
    for (int a = 0; a < 3; ++a) {
      completeness.record(max_abs(completeness_defect(eps, Direction::axis(a))));
      completeness.record(max_abs(completeness_defect(eps, -Direction::axis(a))));
    }
    for (int j = 0; j < 50; ++j) {
      completeness.record(max_abs(completeness_defect(eps, random_direction(rng))));
    }
    longitudinal.record(std::abs(longitudinal_contribution(eps)));
  }
  out.push_back(completeness.finish());
  out.push_back(longitudinal.finish());
}

// --- localfield -----------------------------------------------------------

void localfield_checks(Rng& rng, std::vector<CheckResult>& out) {
  Check scalar("localfield.scalar_limit", 1e-12);
  for (int i = 0; i < 20; ++i) {
    const PermittivityTensor eps = random_biaxial(rng);
    const Direction d = random_direction(rng);
    const double c = uniform(rng, 0.5, 2.0);
    const std::array<RateResult, 3> axes = axis_rates(eps);
    const std::array<double, 3> w{d.x() * d.x(), d.y() * d.y(), d.z() * d.z()};
    const double plain = combine_axis_rates(axes, w).gamma_normalized;
    const double local = rate_biaxial_local(eps, d, LocalFieldTensor::scalar(c)).gamma_normalized;
    scalar.record(rel(local, c * c * plain));

    const UniaxialMedium m(eps.x(), eps.y());
    const DipoleSplit s = split_dipole(m, d);
    scalar.record(rel(rate_uniaxial_local(m, s, LocalFieldTensor::scalar(c)).gamma_normalized,
                      c * c * rate_uniaxial_total(m, s).gamma_normalized));
  }
  out.push_back(scalar.finish());

  Check routes("localfield.route_equivalence", 1e-10);
  for (int i = 0; i < 200; ++i) {
    const PermittivityTensor eps = random_biaxial(rng);
    const Direction d = random_direction(rng);
    const LocalFieldTensor l(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0));
    const AdjustedDipole adj = adjust_dipole(l, d);
    const double via_adjusted =
        rate_arbitrary_dipole(eps, adj.direction).gamma_normalized * adj.magnitude * adj.magnitude;
    routes.record(rel(rate_biaxial_local(eps, d, l).gamma_normalized, via_adjusted));
  }
  out.push_back(routes.finish());
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  // Each module gets its own stream so adding samples to one check does not
  // shift the inputs of the others.
  std::seed_seq seq{options.seed};
  std::array<std::uint64_t, 7> seeds{};
  {
    std::array<std::uint32_t, 14> words{};
    seq.generate(words.begin(), words.end());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      seeds[i] = (std::uint64_t{words[2 * i]} << 32) | words[2 * i + 1];
    }
  }
  auto stream = [&](int i) { return Rng(seeds[static_cast<std::size_t>(i)]); };

  Rng r0 = stream(0);
  media_checks(r0, report.checks, options.inject_fault);
  Rng r1 = stream(1);
  quadrature_checks(r1, report.checks);
  Rng r2 = stream(2);
  uniaxial_checks(r2, report.checks);
  Rng r3 = stream(3);
  biaxial_checks(r3, report.checks);
  Rng r4 = stream(4);
  interp_checks(r4, report.checks);
  Rng r5 = stream(5);
  greens_checks(r5, report.checks);
  Rng r6 = stream(6);
  localfield_checks(r6, report.checks);

  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CheckResult& c) { return c.passed; });
  return report;
}

}  // namespace aniso
