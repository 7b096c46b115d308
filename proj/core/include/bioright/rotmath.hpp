#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace bioright {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Direction cosine matrix. Rows are the unit axes of the rotated frame
/// expressed in the reference frame, so `C_BN * v_N` gives body components.
/// Construction checks orthonormality (1e-10 per element) and det = +1.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}
  explicit Rotation(const Mat3& m);

  static Rotation identity() { return Rotation(); }
  /// Passive elementary rotations (R1, R2, R3) about x, y, z.
  static Rotation about_x(double angle);
  static Rotation about_y(double angle);
  static Rotation about_z(double angle);

  const Mat3& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }
  Vec3 row(int r) const { return m_.row(r).transpose(); }

  Rotation transpose() const;
  Rotation operator*(const Rotation& other) const;
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  /// Largest absolute element of R R^T - I.
  double orthonormality_error() const;

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;
};

/// Maximum element-wise difference between two rotations.
double max_abs_diff(const Rotation& a, const Rotation& b);

/// 3-2-1 (yaw, pitch, roll) Euler angles in radians.
struct EulerYPR {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

/// Angular threshold below pi/2 at which the 3-2-1 extraction is treated
/// as gimbal-locked.
inline constexpr double kGimbalLockMargin = 1e-6;
/// Degeneracy threshold for axis construction, in input length units.
inline constexpr double kAxisEpsilon = 1e-9;

/// x-axis along `x_raw`, z = x x y_temp, y completes the right-handed set.
/// Throws ErrorCode::kDegenerateAxes on zero or (near-)parallel inputs.
Rotation dcm_from_axes(const Vec3& x_raw, const Vec3& y_temp);

struct EulerConversion {
  EulerYPR angles;
  bool gimbal_lock = false;
};

/// R = R1(roll) R2(pitch) R3(yaw). At gimbal lock roll is set to 0 and the
/// free angle is folded into yaw; `gimbal_lock` reports it.
EulerConversion dcm_to_euler321_checked(const Rotation& r);
EulerYPR dcm_to_euler321(const Rotation& r);
Rotation euler321_to_dcm(const EulerYPR& e);

/// C_AB = C_AN C_BN^T.
Rotation relative_rotation(const Rotation& c_an, const Rotation& c_bn);

/// Removes 2*pi jumps so consecutive differences are at most pi.
std::vector<double> unwrap_angles(std::span<const double> series);

/// Wraps to (-pi, pi].
double wrap_pi(double angle);

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace bioright
