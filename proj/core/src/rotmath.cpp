#include "bioright/rotmath.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "bioright/error.hpp"

namespace bioright {

namespace {

constexpr double kOrthoTol = 1e-10;

}  // namespace

Rotation::Rotation(const Mat3& m) : m_(m) {
  if (!m.allFinite() || orthonormality_error() > kOrthoTol ||
      std::abs(m.determinant() - 1.0) > kOrthoTol) {
    throw Error(ErrorCode::kInvalidArgument,
                "matrix is not a proper rotation (orthonormal, det=+1)");
  }
}

Rotation Rotation::about_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << 1, 0, 0,
       0, c, s,
       0, -s, c;
  return Rotation(m, Unchecked{});
}

Rotation Rotation::about_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, 0, -s,
       0, 1, 0,
       s, 0, c;
  return Rotation(m, Unchecked{});
}

Rotation Rotation::about_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, s, 0,
       -s, c, 0,
       0, 0, 1;
  return Rotation(m, Unchecked{});
}

Rotation Rotation::transpose() const {
  return Rotation(m_.transpose(), Unchecked{});
}

Rotation Rotation::operator*(const Rotation& other) const {
  return Rotation(m_ * other.m_, Unchecked{});
}

double Rotation::orthonormality_error() const {
  return (m_ * m_.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Rotation& a, const Rotation& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

Rotation dcm_from_axes(const Vec3& x_raw, const Vec3& y_temp) {
  const double x_len = x_raw.norm();
  if (!(x_len > kAxisEpsilon)) {
    throw Error(ErrorCode::kDegenerateAxes, "x axis has zero length");
  }
  const Vec3 x = x_raw / x_len;
  const Vec3 z_raw = x.cross(y_temp);
  // |x_hat x y| compared in input units, same as |x_raw x y| / |x_raw|.
  if (!(z_raw.norm() > kAxisEpsilon)) {
    throw Error(ErrorCode::kDegenerateAxes,
                "axis vectors are parallel or companion axis is zero");
  }
  const Vec3 z = z_raw.normalized();
  const Vec3 y = z.cross(x);

  Mat3 m;
  m.row(0) = x.transpose();
  m.row(1) = y.transpose();
  m.row(2) = z.transpose();
  return Rotation(m);
}

double wrap_pi(double angle) {
  double w = std::remainder(angle, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

EulerConversion dcm_to_euler321_checked(const Rotation& r) {
  EulerConversion out;
  const double s_pitch = std::clamp(-r(0, 2), -1.0, 1.0);
  const double pitch = std::asin(s_pitch);
  out.angles.pitch = pitch;

  if (std::abs(pitch) > kPi / 2.0 - kGimbalLockMargin) {
    // With roll = 0: C(1,0) = -sin(yaw), C(1,1) = cos(yaw).
    out.gimbal_lock = true;
    out.angles.roll = 0.0;
    out.angles.yaw = wrap_pi(std::atan2(-r(1, 0), r(1, 1)));
    return out;
  }
  out.angles.yaw = wrap_pi(std::atan2(r(0, 1), r(0, 0)));
  out.angles.roll = wrap_pi(std::atan2(r(1, 2), r(2, 2)));
  return out;
}

EulerYPR dcm_to_euler321(const Rotation& r) {
  return dcm_to_euler321_checked(r).angles;
}

Rotation euler321_to_dcm(const EulerYPR& e) {
  return Rotation::about_x(e.roll) * Rotation::about_y(e.pitch) *
         Rotation::about_z(e.yaw);
}

Rotation relative_rotation(const Rotation& c_an, const Rotation& c_bn) {
  return c_an * c_bn.transpose();
}

std::vector<double> unwrap_angles(std::span<const double> series) {
  std::vector<double> out(series.begin(), series.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double d = series[i] - series[i - 1];
    offset -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    out[i] = series[i] + offset;
  }
  return out;
}

}  // namespace bioright
