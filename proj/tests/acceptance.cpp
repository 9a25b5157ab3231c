// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "aniso/biaxial.hpp"
#include "aniso/cli.hpp"
#include "aniso/greens.hpp"
#include "aniso/interp.hpp"
#include "aniso/localfield.hpp"
#include "aniso/uniaxial.hpp"
#include "oracles.hpp"

using namespace aniso;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSeed = 20240917;

struct Outcome {
  double worst = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::string note;

  void record(double defect) {
    ++samples;
    if (!(defect <= worst)) worst = defect;
  }
  bool passed() const { return samples > 0 && worst <= tolerance; }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string run_cli_text(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run_cli(args, out, err);
  return out.str();
}

// Parses sweep CSV rows into (eps_sweep, gamma_numeric, gamma_model, rel_error).
std::vector<std::array<double, 4>> sweep_rows(const std::string& csv) {
  std::vector<std::array<double, 4>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back({std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[4])});
  }
  return rows;
}

// --- criteria -------------------------------------------------------------

Outcome uniaxial_closed_vs_quadrature() {
  Outcome o{0, 1e-8};
  const std::array<double, 6> values{0.5, 1.0, 1.5, 2.0, 5.0, 7.0};
  for (double e1 : values) {
    for (double e2 : values) {
      const UniaxialMedium m(e1, e2);
      for (double alpha : {0.0, pi / 2, pi / 4}) {
        const DipoleSplit s = DipoleSplit::at_angle(alpha);
        const double closed = rate_uniaxial_total(m, s).gamma_normalized;
        const Direction d(s.d_par(), s.d_perp(), 0.0);
        o.record(rel(rate_numeric({e1, e2, e2}, d).gamma_normalized, closed));
      }
    }
  }
  return o;
}

Outcome isotropic_limit() {
  Outcome o{0, 1e-10};
  std::mt19937_64 rng(kSeed + 2);
  for (double e : {0.5, 1.0, 2.25, 4.0, 9.0}) {
    std::vector<Vec3> dipoles{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    for (int i = 0; i < 5; ++i) dipoles.push_back(oracle::random_unit(rng));
    for (const Vec3& d : dipoles) {
      o.record(rel(rate_numeric({e, e, e}, Direction(d)).gamma_normalized, std::sqrt(e)));
    }
  }
  return o;
}

Outcome surprising_result() {
  Outcome o{0, 1e-8};
  o.record(std::abs(rate_numeric({7, 1, 1}, Direction::axis(0)).gamma_normalized - 1.0));
  return o;
}

Outcome random_orientation() {
  Outcome o{0, 1.0};
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_real_distribution<double> u(0.5, 8.0);
  double worst_z = 0.0;
  double worst_decomp = 0.0;
  for (int c = 0; c < 10; ++c) {
    const UniaxialMedium m(u(rng), u(rng));
    const double formula = rate_random_orientation(m);
    const double decomposition = (rate_uniaxial_total(m, DipoleSplit::parallel()).gamma_normalized +
                                  2.0 * rate_uniaxial_total(m, DipoleSplit::perpendicular()).gamma_normalized) /
                                 3.0;
    constexpr int n = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rate_uniaxial_total(m, split_dipole(m, Direction(oracle::random_unit(rng)))).gamma_normalized;
      sum += g;
      sum2 += g * g;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
    const double z = std::abs(mean - formula) / se;
    const double dd = rel(formula, decomposition);
    worst_z = std::max(worst_z, z);
    worst_decomp = std::max(worst_decomp, dd);
    // one combined defect: standard errors / 3 and decomposition / 1e-14
    o.record(std::max(z / 3.0, dd / 1e-14));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |MC - formula| = %.3g SE (tol 3), max decomposition defect %.3g (tol 1e-14)",
                worst_z, worst_decomp);
  o.note = buf;
  return o;
}

Outcome model_sweep_between_endpoints(std::string& csv) {
  Outcome o{0, 1.0};
  int code = 0;
  csv = run_cli_text({"sweep", "--eps-x", "1.5", "--eps-z", "5", "--sweep", "eps_y", "--range", "1.5:5:100"}, code);
  if (code != 0) {
    o.note = "sweep exited with " + std::to_string(code);
    o.record(INFINITY);
    return o;
  }
  const auto rows = sweep_rows(csv);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r[3]);
  const double ends = std::max(rows.front()[3], rows.back()[3]);
  o.record(std::max(worst / 0.02, ends / 1e-8));
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu rows, max rel error %.4g (tol 0.02), endpoints %.3g (tol 1e-8)", rows.size(),
                worst, ends);
  o.note = buf;
  return o;
}

Outcome model_sweep_grid() {
  Outcome o{0, 0.05};
  for (double ex : {6.0, 3.0, 1.0}) {
    for (double ez : {4.0, 2.0, 1.2}) {
      int code = 0;
      const std::string csv = run_cli_text({"sweep", "--eps-x", cli::format_number(ex), "--eps-z",
                                            cli::format_number(ez), "--sweep", "eps_y", "--range", "1:7:50"},
                                           code);
      if (code != 0) {
        o.record(INFINITY);
        continue;
      }
      for (const auto& r : sweep_rows(csv)) o.record(r[3]);
    }
  }
  return o;
}

Outcome greens_equivalence() {
  Outcome o{0, 1e-8};
  std::mt19937_64 rng(kSeed + 7);
  for (int i = 0; i < 50; ++i) {
    const PermittivityTensor eps(oracle::random_eps(rng));
    const Direction d(oracle::random_unit(rng));
    o.record(rel(imag_greens_trace(eps, d, default_rate_spec()).gamma_normalized,
                 rate_numeric(eps, d).gamma_normalized));
  }
  return o;
}

Outcome completeness() {
  Outcome o{0, 1e-12};
  std::mt19937_64 rng(kSeed + 8);
  for (int e = 0; e < 20; ++e) {
    const PermittivityTensor eps(oracle::random_eps(rng));
    std::vector<Vec3> dirs;
    for (int a = 0; a < 3; ++a) {
      dirs.push_back(Vec3::Unit(a));
      dirs.push_back(-Vec3::Unit(a));
    }
    for (int i = 0; i < 1000; ++i) dirs.push_back(oracle::random_unit(rng));
    for (const Vec3& k : dirs) o.record(completeness_defect(eps, Direction(k)).cwiseAbs().maxCoeff());
  }
  return o;
}

Outcome eigenmode_properties() {
  Outcome o{0, 1e-12};
  std::mt19937_64 rng(kSeed + 9);
  std::array<double, 5> worst{};
  for (int i = 0; i < 1000; ++i) {
    const Vec3 e = oracle::random_eps(rng);
    const PermittivityTensor eps(e);
    const Direction kappa(oracle::random_unit(rng));
    const Vec3& k = kappa.vec();

    Eigen::Vector3d mags =
        Eigen::EigenSolver<Mat3>(build_wave_matrix(eps, kappa)).eigenvalues().cwiseAbs();
    std::sort(mags.data(), mags.data() + 3);
    const double rank = mags[0] / mags[2];

    const ModePair m = solve_modes(eps, kappa);
    const ModePair back = solve_modes(eps, -kappa);
    double recip = 0.0;
    double gauss = 0.0;
    for (int b = 0; b < 2; ++b) {
      recip = std::max(recip, rel(back[b].eps_eff, m[b].eps_eff));
      recip = std::max(recip, m[b].polarization.vec().cross(back[b].polarization.vec()).norm());
      gauss = std::max(gauss, std::abs(k.dot(e.cwiseProduct(m[b].polarization.vec()))));
    }
    const Vec3& e1 = m[0].polarization.vec();
    const Vec3& e2 = m[1].polarization.vec();
    const double ortho = std::abs(e1.dot(e.cwiseProduct(e2)));
    double magnetic = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Vec3& ea = m[a].polarization.vec();
        const Vec3& eb = m[b].polarization.vec();
        magnetic = std::max(magnetic, std::abs(k.cross(ea).dot(k.cross(eb)) -
                                               ea.dot(e.cwiseProduct(eb)) / (m[a].n_eff * m[b].n_eff)));
      }
    }
    const std::array<double, 5> d{rank, recip, gauss, ortho, magnetic};
    for (int j = 0; j < 5; ++j) worst[j] = std::max(worst[j], d[j]);
    o.record(*std::max_element(d.begin(), d.end()));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "rank %.2g, reciprocity %.2g, gauss %.2g, eps-orthogonality %.2g, magnetic %.2g",
                worst[0], worst[1], worst[2], worst[3], worst[4]);
  o.note = buf;
  return o;
}

// Local maxima of f on a dense grid, each refined by golden-section search.
std::vector<double> numeric_peaks(const UniaxialMedium& m) {
  constexpr int n = 20000;
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) f[i] = angular_distribution(m, pi * i / n);
  std::vector<double> peaks;
  for (int i = 1; i < n; ++i) {
    if (!(f[i] >= f[i - 1] && f[i] > f[i + 1])) continue;
    double a = pi * (i - 1) / n;
    double b = pi * (i + 1) / n;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
      const double c = b - g * (b - a);
      const double d = a + g * (b - a);
      if (angular_distribution(m, c) > angular_distribution(m, d)) {
        b = d;
      } else {
        a = c;
      }
    }
    peaks.push_back(0.5 * (a + b));
  }
  return peaks;
}

Outcome peak_angles() {
  Outcome o{0, 1e-3};
  for (double r : {2.0, 3.0, 5.0, 7.0}) {
    const double delta = std::acos(std::sqrt(2.0 / (3.0 * (r - 1.0))));
    const std::vector<double> p = numeric_peaks({1.0, r});
    if (p.size() != 2) {
      o.record(INFINITY);
      continue;
    }
    o.record(std::abs(p[0] - (pi / 2 - delta)));
    o.record(std::abs(p[1] - (pi / 2 + delta)));
  }
  for (double r : {0.5, 1.0, 1.5, 5.0 / 3.0}) {
    // all local maxima within tolerance of pi/2
    const std::vector<double> p = numeric_peaks({1.0, r});
    double off = p.empty() ? INFINITY : 0.0;
    for (double x : p) off = std::max(off, std::abs(x - pi / 2));
    o.record(off);
  }
  return o;
}

Outcome dipole_decomposition() {
  Outcome o{0, 1e-8};
  std::mt19937_64 rng(kSeed + 11);
  for (int i = 0; i < 200; ++i) {
    const PermittivityTensor eps(oracle::random_eps(rng));
    const Direction d(oracle::random_unit(rng));
    o.record(rel(rate_numeric(eps, d).gamma_normalized, rate_arbitrary_dipole(eps, d).gamma_normalized));
  }
  return o;
}

Outcome local_field() {
  Outcome o{0, 1.0};
  std::mt19937_64 rng(kSeed + 12);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  double scalar = 0.0;
  double tensor = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PermittivityTensor eps(oracle::random_eps(rng));
    const Direction d(oracle::random_unit(rng));
    const double c = u(rng);
    const LocalFieldTensor l(u(rng), u(rng), u(rng));
    if (i < 20) {
      const double bare = rate_arbitrary_dipole(eps, d).gamma_normalized;
      scalar = std::max(scalar, rel(rate_biaxial_local(eps, d, LocalFieldTensor::scalar(c)).gamma_normalized, c * c * bare));
    }
    const AdjustedDipole a = adjust_dipole(l, d);
    const double via_adjusted = a.magnitude * a.magnitude * rate_numeric(eps, a.direction).gamma_normalized;
    tensor = std::max(tensor, rel(rate_biaxial_local(eps, d, l).gamma_normalized, via_adjusted));
  }
  o.record(std::max(scalar / 1e-12, tensor / 1e-10));
  char buf[128];
  std::snprintf(buf, sizeof buf, "scalar %.3g (tol 1e-12), tensor vs adjusted dipole %.3g (tol 1e-10)", scalar,
                tensor);
  o.note = buf;
  return o;
}

Outcome determinism(const std::string& first) {
  Outcome o{0, 0.0};
  int code = 0;
  const std::string second =
      run_cli_text({"sweep", "--eps-x", "1.5", "--eps-z", "5", "--sweep", "eps_y", "--range", "1.5:5:100"}, code);
  o.record(second == first && !first.empty() ? 0.0 : 1.0);
  o.note = std::to_string(first.size()) + " bytes compared";
  return o;
}

}  // namespace

int main() {
  std::string sweep_csv;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"uniaxial closed form vs quadrature", uniaxial_closed_vs_quadrature},
      {"isotropic limit", isotropic_limit},
      {"eps=(7,1,1) dipole x gives 1", surprising_result},
      {"random-orientation average", random_orientation},
      {"model sweep eps_y in [1.5, 5]", [&] { return model_sweep_between_endpoints(sweep_csv); }},
      {"model sweeps over 9 media", model_sweep_grid},
      {"Green's route equivalence", greens_equivalence},
      {"completeness identity", completeness},
      {"eigenmode property suite", eigenmode_properties},
      {"peak emission angles", peak_angles},
      {"dipole decomposition", dipole_decomposition},
      {"local-field consistency", local_field},
      {"sweep determinism", [&] { return determinism(sweep_csv); }},
  };

  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = check();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = o.passed();
    failures += ok ? 0 : 1;
    std::printf("%s %2d %-36s worst=%.3g tol=%.3g n=%zu (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", index, name, o.worst,
                o.tolerance, o.samples, secs, o.note.empty() ? "" : "  ", o.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
