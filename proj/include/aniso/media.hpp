#pragma once

// Anisotropic media and the plane-wave eigenproblem.
//
// All permittivities are relative (divided by the vacuum permittivity), and
// the medium is described in its principal (diagonalizing) frame. A plane
// wave with unit direction kappa and effective relative permittivity
// eps_eff has angular frequency omega = c k / sqrt(eps_eff).

#include <array>
#include <string_view>

#include <Eigen/Dense>

namespace aniso {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

namespace tolerance {
/// Two principal permittivities are treated as equal below this relative gap.
inline constexpr double kEqualPermittivity = 1e-12;
/// Two branches are degenerate below this relative gap in eps_eff.
inline constexpr double kDegenerateBranch = 1e-9;
/// Closed-form eigenvectors are abandoned when both branches come this close
/// (relative) to a principal permittivity; the formula's rounding error grows
/// as the inverse of that gap.
inline constexpr double kEigenvectorSingular = 1e-4;
/// Closed-form eigenvalues are abandoned when s_k / t_k drops below this;
/// near an optic axis the rounding error of eps_eff grows like t_k / s_k.
inline constexpr double kNearOpticAxis = 1e-2;
/// Accepted deviation of a unit vector's norm from 1.
inline constexpr double kUnitNorm = 1e-12;
}  // namespace tolerance

enum class MediumKind { isotropic, uniaxial, biaxial };

std::string_view to_string(MediumKind kind);

/// Diagonal relative permittivity (eps_x, eps_y, eps_z) in crystal axes.
class PermittivityTensor {
 public:
  /// Throws std::invalid_argument unless every entry is finite and > 0.
  PermittivityTensor(double eps_x, double eps_y, double eps_z);
  explicit PermittivityTensor(const Vec3& diagonal);

  double x() const { return diag_.x(); }
  double y() const { return diag_.y(); }
  double z() const { return diag_.z(); }
  double operator[](int axis) const { return diag_[axis]; }
  const Vec3& diagonal() const { return diag_; }

  Mat3 matrix() const { return diag_.asDiagonal(); }
  Mat3 inverse() const { return diag_.cwiseInverse().asDiagonal(); }
  double trace() const { return diag_.sum(); }
  double determinant() const { return diag_.prod(); }

  /// kappa . (eps kappa)
  double quadratic_form(const Vec3& v) const { return v.dot(diag_.cwiseProduct(v)); }

  MediumKind kind() const;

  /// Axis whose permittivity differs from the other two (uniaxial media).
  /// Returns 0 for isotropic media; throws std::logic_error for biaxial ones.
  int distinguished_axis() const;

  /// New tensor with entries (eps[order[0]], eps[order[1]], eps[order[2]]).
  PermittivityTensor permuted(const std::array<int, 3>& order) const;

  bool operator==(const PermittivityTensor&) const = default;

 private:
  Vec3 diag_;
};

/// Unit 3-vector: a wave direction or a dipole orientation.
class Direction {
 public:
  /// Throws std::invalid_argument unless the norm is 1 within 1e-12.
  Direction(double x, double y, double z);
  explicit Direction(const Vec3& v);

  /// Rescales to unit length. Throws std::invalid_argument for zero or
  /// non-finite input.
  static Direction normalized(const Vec3& v);
  static Direction normalized(double x, double y, double z) { return normalized(Vec3(x, y, z)); }

  /// Unit vector along crystal axis 0, 1 or 2.
  static Direction axis(int index);

  /// kappa = (cos theta, sin theta cos phi, sin theta sin phi); theta is
  /// measured from the x axis.
  static Direction from_angles(double theta, double phi);

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double operator[](int i) const { return v_[i]; }
  const Vec3& vec() const { return v_; }

  Direction operator-() const;

 private:
  struct Unchecked {};
  Direction(const Vec3& v, Unchecked) : v_(v) {}
  Vec3 v_;
};

enum class Branch { ordinary, extraordinary, plus, minus, degenerate_1, degenerate_2 };

std::string_view to_string(Branch branch);

/// One polarization branch for a fixed wave direction.
struct ModeSolution {
  Direction polarization;  // unit eigenvector e
  double eps_eff;          // omega = c k / sqrt(eps_eff)
  double n_eff;            // sqrt(eps_eff)
  Branch branch;
};

/// The two transverse branches, sorted by eps_eff descending.
struct ModePair {
  ModeSolution first;
  ModeSolution second;
  bool degenerate = false;      // optic axis or isotropic medium
  bool used_fallback = false;   // numeric eigen-solve instead of closed form

  const ModeSolution& operator[](int i) const { return i == 0 ? first : second; }
};

/// Orthogonal rotation (det +1) taking lab-frame vectors to crystal axes.
class MaterialFrame {
 public:
  static MaterialFrame identity() { return MaterialFrame(Mat3::Identity()); }
  /// Throws std::invalid_argument unless orthogonal with det +1 within 1e-12.
  explicit MaterialFrame(const Mat3& rotation);
  /// Row-major 3x3.
  static MaterialFrame from_row_major(const std::array<double, 9>& values);

  const Mat3& rotation() const { return rotation_; }

 private:
  Mat3 rotation_;
};

/// M_ij = (delta_ij - kappa_i kappa_j) / eps_i. Its nonzero eigenvalues are
/// 1 / eps_eff of the two transverse branches.
Mat3 build_wave_matrix(const PermittivityTensor& eps, const Direction& kappa);

/// Both transverse branches for direction kappa. Uses the uniaxial or
/// biaxial closed forms and drops to solve_modes_numeric wherever the
/// closed-form eigenvectors are singular.
ModePair solve_modes(const PermittivityTensor& eps, const Direction& kappa);

/// Direct symmetric eigen-solve of N e = lambda eps e, N = 1 - kappa kappa^T.
ModePair solve_modes_numeric(const PermittivityTensor& eps, const Direction& kappa);

/// e . (eps e): the denominator of the field quantization prefactor.
double mode_normalization(const PermittivityTensor& eps, const ModeSolution& mode);

Direction to_crystal_frame(const MaterialFrame& frame, const Direction& v);

}  // namespace aniso
