#include "aniso/media.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aniso {

namespace {

bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) < rel * std::max(std::abs(a), std::abs(b));
}

// First component above this magnitude is made positive.
constexpr double kSignThreshold = 1e-13;

Vec3 canonical_sign(Vec3 v) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > kSignThreshold) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

struct Candidate {
  Vec3 e;  // not necessarily normalized
  double eps_eff;
  Branch branch;
};

ModeSolution make_mode(const Candidate& c) {
  const Vec3 e = canonical_sign(c.e.normalized());
  return ModeSolution{Direction::normalized(e), c.eps_eff, std::sqrt(c.eps_eff), c.branch};
}

bool lexicographically_greater(const Vec3& a, const Vec3& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

// Orders by eps_eff descending and relabels degenerate pairs.
ModePair assemble(Candidate a, Candidate b, bool used_fallback) {
  const bool degenerate = nearly_equal(a.eps_eff, b.eps_eff, tolerance::kDegenerateBranch);
  ModeSolution ma = make_mode(a);
  ModeSolution mb = make_mode(b);
  if (degenerate) {
    if (lexicographically_greater(mb.polarization.vec(), ma.polarization.vec())) std::swap(ma, mb);
    ma.branch = Branch::degenerate_1;
    mb.branch = Branch::degenerate_2;
  } else if (mb.eps_eff > ma.eps_eff) {
    std::swap(ma, mb);
  }
  return ModePair{ma, mb, degenerate, used_fallback};
}

// Any orthonormal pair spanning the plane orthogonal to k.
std::pair<Vec3, Vec3> transverse_basis(const Vec3& k) {
  Eigen::Index smallest = 0;
  k.cwiseAbs().minCoeff(&smallest);
  const Vec3 u = k.cross(Vec3::Unit(smallest)).normalized();
  const Vec3 v = k.cross(u).normalized();
  return {u, v};
}

ModePair solve_isotropic(const PermittivityTensor& eps, const Direction& kappa) {
  const double eps_eff = eps.trace() / 3.0;
  const auto [u, v] = transverse_basis(kappa.vec());
  return assemble({u, eps_eff, Branch::degenerate_1}, {v, eps_eff, Branch::degenerate_2}, false);
}

// eps = eps1 along axis a, eps2 in the plane spanned by the other two.
ModePair solve_uniaxial(const PermittivityTensor& eps, const Direction& kappa) {
  const int a = eps.distinguished_axis();
  const int b = (a + 1) % 3;
  const int c = (a + 2) % 3;
  const double eps1 = eps[a];
  const double eps2 = 0.5 * (eps[b] + eps[c]);
  const Vec3& k = kappa.vec();
  const double k_perp2 = k[b] * k[b] + k[c] * k[c];

  if (k_perp2 == 0.0) {
    // Along the optic axis both branches see eps2.
    return assemble({Vec3::Unit(b), eps2, Branch::degenerate_1},
                    {Vec3::Unit(c), eps2, Branch::degenerate_2}, false);
  }

  // Ordinary: axis x kappa, i.e. (0, -k3, k2) for a = x.
  const Vec3 e_o = Vec3::Unit(a).cross(k);
  // Extraordinary: (-eps2 (k2^2 + k3^2), eps1 k1 k2, eps1 k1 k3) for a = x.
  Vec3 e_e;
  e_e[a] = -eps2 * k_perp2;
  e_e[b] = eps1 * k[a] * k[b];
  e_e[c] = eps1 * k[a] * k[c];
  const double q = eps1 * k[a] * k[a] + eps2 * k_perp2;
  const double eps_e = eps1 * eps2 / q;

  return assemble({e_e, eps_e, Branch::extraordinary}, {e_o, eps2, Branch::ordinary}, false);
}

ModePair solve_biaxial(const PermittivityTensor& eps, const Direction& kappa) {
  const Vec3& d = eps.diagonal();
  const Vec3& k = kappa.vec();
  const double det = eps.determinant();
  const double tr = eps.trace();

  double q = 0.0;
  double t = 0.0;
  for (int i = 0; i < 3; ++i) {
    q += d[i] * k[i] * k[i];
    t += d[i] * (tr - d[i]) * k[i] * k[i];
  }
  const double s = std::sqrt(std::max(0.0, t * t - 4.0 * det * q));
  if (s < tolerance::kNearOpticAxis * t) return solve_modes_numeric(eps, kappa);

  // eps_plus = 2 det / (t + s); eps_minus = 2 det / (t - s), rewritten to
  // avoid the cancellation in t - s.
  const double eps_plus = 2.0 * det / (t + s);
  const double eps_minus = (t + s) / (2.0 * q);

  // e_i = k_i / (eps_i - eps_eff) loses digits as eps_eff approaches some
  // eps_i, so only the branch farthest from every eps_i goes through it.
  auto min_gap = [&](double eps_eff) {
    double g = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) g = std::min(g, std::abs(d[i] - eps_eff) / d[i]);
    return g;
  };
  const bool use_minus = min_gap(eps_minus) >= min_gap(eps_plus);
  const double eps_formula = use_minus ? eps_minus : eps_plus;
  if (min_gap(eps_formula) < tolerance::kEigenvectorSingular) return solve_modes_numeric(eps, kappa);

  Vec3 e;
  for (int i = 0; i < 3; ++i) e[i] = k[i] / (d[i] - eps_formula);

  // In y = eps^{1/2} e the two branches and y0 = eps^{1/2} kappa are
  // orthonormal, so the other branch is y0 x y1. Projecting y0 out of y1
  // first makes the Gauss constraint and eps-orthogonality hold to rounding.
  const Vec3 root = d.cwiseSqrt();
  const Vec3 y0 = root.cwiseProduct(k).normalized();
  Vec3 y1 = root.cwiseProduct(e);
  y1 = (y1 - y1.dot(y0) * y0).normalized();
  const Vec3 y2 = y0.cross(y1);
  const Vec3 e1 = y1.cwiseQuotient(root);
  const Vec3 e2 = y2.cwiseQuotient(root);

  const Candidate minus{use_minus ? e1 : e2, eps_minus, Branch::minus};
  const Candidate plus{use_minus ? e2 : e1, eps_plus, Branch::plus};
  return assemble(minus, plus, false);
}

}  // namespace

std::string_view to_string(MediumKind kind) {
  switch (kind) {
    case MediumKind::isotropic: return "isotropic";
    case MediumKind::uniaxial: return "uniaxial";
    case MediumKind::biaxial: return "biaxial";
  }
  return "unknown";
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::ordinary: return "ordinary";
    case Branch::extraordinary: return "extraordinary";
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
    case Branch::degenerate_1: return "degenerate-1";
    case Branch::degenerate_2: return "degenerate-2";
  }
  return "unknown";
}

PermittivityTensor::PermittivityTensor(double eps_x, double eps_y, double eps_z)
    : PermittivityTensor(Vec3(eps_x, eps_y, eps_z)) {}

PermittivityTensor::PermittivityTensor(const Vec3& diagonal) : diag_(diagonal) {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(diag_[i]) || diag_[i] <= 0.0) {
      throw std::invalid_argument("permittivity entries must be finite and positive, got " +
                                  std::to_string(diag_[i]));
    }
  }
}

MediumKind PermittivityTensor::kind() const {
  constexpr double tol = tolerance::kEqualPermittivity;
  const bool xy = nearly_equal(diag_[0], diag_[1], tol);
  const bool yz = nearly_equal(diag_[1], diag_[2], tol);
  const bool xz = nearly_equal(diag_[0], diag_[2], tol);
  if (xy && yz && xz) return MediumKind::isotropic;
  if (xy || yz || xz) return MediumKind::uniaxial;
  return MediumKind::biaxial;
}

int PermittivityTensor::distinguished_axis() const {
  constexpr double tol = tolerance::kEqualPermittivity;
  switch (kind()) {
    case MediumKind::isotropic: return 0;
    case MediumKind::uniaxial:
      if (nearly_equal(diag_[1], diag_[2], tol)) return 0;
      if (nearly_equal(diag_[0], diag_[2], tol)) return 1;
      return 2;
    case MediumKind::biaxial: break;
  }
  throw std::logic_error("biaxial medium has no distinguished axis");
}

PermittivityTensor PermittivityTensor::permuted(const std::array<int, 3>& order) const {
  return PermittivityTensor(diag_[order[0]], diag_[order[1]], diag_[order[2]]);
}

Direction::Direction(double x, double y, double z) : Direction(Vec3(x, y, z)) {}

Direction::Direction(const Vec3& v) : v_(v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > tolerance::kUnitNorm) {
    throw std::invalid_argument("direction must be a unit vector");
  }
}

Direction Direction::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  return Direction(v / n, Unchecked{});
}

Direction Direction::axis(int index) {
  if (index < 0 || index > 2) throw std::invalid_argument("axis index must be 0, 1 or 2");
  return Direction(Vec3::Unit(index), Unchecked{});
}

Direction Direction::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return normalized(Vec3(std::cos(theta), st * std::cos(phi), st * std::sin(phi)));
}

Direction Direction::operator-() const { return Direction(-v_, Unchecked{}); }

MaterialFrame::MaterialFrame(const Mat3& rotation) : rotation_(rotation) {
  const double orth = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!rotation.allFinite() || orth > 1e-12 || std::abs(rotation.determinant() - 1.0) > 1e-12) {
    throw std::invalid_argument("frame must be a proper rotation (orthogonal, det +1)");
  }
}

MaterialFrame MaterialFrame::from_row_major(const std::array<double, 9>& values) {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r(i, j) = values[3 * i + j];
  }
  return MaterialFrame(r);
}

Mat3 build_wave_matrix(const PermittivityTensor& eps, const Direction& kappa) {
  const Vec3& k = kappa.vec();
  Mat3 m = Mat3::Identity() - k * k.transpose();
  for (int i = 0; i < 3; ++i) m.row(i) /= eps[i];
  return m;
}

ModePair solve_modes(const PermittivityTensor& eps, const Direction& kappa) {
  switch (eps.kind()) {
    case MediumKind::isotropic: return solve_isotropic(eps, kappa);
    case MediumKind::uniaxial: return solve_uniaxial(eps, kappa);
    case MediumKind::biaxial: return solve_biaxial(eps, kappa);
  }
  throw std::logic_error("unreachable medium kind");
}

ModePair solve_modes_numeric(const PermittivityTensor& eps, const Direction& kappa) {
  // N e = lambda eps e  <=>  (S N S) u = lambda u  with S = eps^{-1/2}, e = S u.
  const Vec3 s = eps.diagonal().cwiseSqrt().cwiseInverse();
  const Vec3& k = kappa.vec();
  const Mat3 n = Mat3::Identity() - k * k.transpose();
  const Mat3 a = s.asDiagonal() * n * s.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Mat3> solver(a);
  const Vec3& lambda = solver.eigenvalues();  // ascending; lambda(0) ~ 0 belongs to e ~ kappa
  const Mat3& u = solver.eigenvectors();

  Candidate hi{s.cwiseProduct(u.col(1)), 1.0 / lambda(1), Branch::minus};
  Candidate lo{s.cwiseProduct(u.col(2)), 1.0 / lambda(2), Branch::plus};
  switch (eps.kind()) {
    case MediumKind::isotropic:
      hi.branch = Branch::degenerate_1;
      lo.branch = Branch::degenerate_2;
      break;
    case MediumKind::uniaxial: {
      const int ax = eps.distinguished_axis();
      const bool hi_ordinary = std::abs(hi.e.normalized()[ax]) < std::abs(lo.e.normalized()[ax]);
      hi.branch = hi_ordinary ? Branch::ordinary : Branch::extraordinary;
      lo.branch = hi_ordinary ? Branch::extraordinary : Branch::ordinary;
      break;
    }
    case MediumKind::biaxial: break;
  }
  return assemble(hi, lo, true);
}

double mode_normalization(const PermittivityTensor& eps, const ModeSolution& mode) {
  return eps.quadratic_form(mode.polarization.vec());
}

Direction to_crystal_frame(const MaterialFrame& frame, const Direction& v) {
  return Direction::normalized(frame.rotation() * v.vec());
}

}  // namespace aniso
