#pragma once

#include <cmath>

#include "uuvlab/vec3.hpp"

namespace uuvlab {

inline constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle to (-pi, pi].
inline double wrapAngle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

/// Z-Y-X intrinsic Euler angles (yaw-pitch-roll), radians.
struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

/// Scalar-first unit quaternion, Hamilton convention, body-to-world.
/// Canonical sign: w >= 0 (leading nonzero component positive when w == 0).
struct UnitQuat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr UnitQuat() = default;
  constexpr UnitQuat(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  UnitQuat normalized() const {
    const double n = norm();
    UnitQuat q{w / n, x / n, y / n, z / n};
    q.canonicalize();
    return q;
  }

  void canonicalize() {
    bool flip = false;
    if (w < 0.0) {
      flip = true;
    } else if (w == 0.0) {
      if (x < 0.0) flip = true;
      else if (x == 0.0 && y < 0.0) flip = true;
      else if (x == 0.0 && y == 0.0 && z < 0.0) flip = true;
    }
    if (flip) { w = -w; x = -x; y = -y; z = -z; }
  }

  constexpr UnitQuat conj() const { return {w, -x, -y, -z}; }

  Vec3 vec() const { return {x, y, z}; }

  bool isFinite() const {
    return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) &&
           std::isfinite(z);
  }

  /// Rotate a body-frame vector into the world frame.
  Vec3 rotate(const Vec3& v) const {
    const Vec3 u{x, y, z};
    const Vec3 t = 2.0 * u.cross(v);
    return v + w * t + u.cross(t);
  }

  /// Rotate a world-frame vector into the body frame.
  Vec3 rotateInverse(const Vec3& v) const { return conj().rotate(v); }

  static UnitQuat fromAxisAngle(const Vec3& axis, double angle) {
    const Vec3 u = axis.normalized();
    const double h = 0.5 * angle;
    const double s = std::sin(h);
    UnitQuat q{std::cos(h), u.x * s, u.y * s, u.z * s};
    return q.normalized();
  }
};

/// Hamilton product, renormalized and sign-canonicalized.
inline UnitQuat quatMul(const UnitQuat& a, const UnitQuat& b) {
  UnitQuat q{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
             a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
             a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
             a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  return q.normalized();
}

inline constexpr double kGimbalMargin = 1e-6;

struct EulerResult {
  EulerAngles angles;
  bool gimbalProximity = false;
};

/// Quaternion to Z-Y-X intrinsic Euler angles. Near pitch = +-pi/2 the
/// decomposition is degenerate; roll is set to 0 by convention and the
/// gimbalProximity flag is raised.
inline EulerResult quatToEuler(const UnitQuat& q) {
  EulerResult r;
  const double sinp = 2.0 * (q.w * q.y - q.z * q.x);
  if (std::abs(sinp) >= 1.0 - 1e-12) {
    r.angles.pitch = std::copysign(0.5 * kPi, sinp);
    r.angles.roll = 0.0;
    r.angles.yaw = wrapAngle(2.0 * std::atan2(q.z, q.w));
    r.gimbalProximity = true;
    return r;
  }
  r.angles.pitch = std::asin(sinp);
  r.angles.roll = std::atan2(2.0 * (q.w * q.x + q.y * q.z),
                             1.0 - 2.0 * (q.x * q.x + q.y * q.y));
  r.angles.yaw = std::atan2(2.0 * (q.w * q.z + q.x * q.y),
                            1.0 - 2.0 * (q.y * q.y + q.z * q.z));
  r.gimbalProximity = std::abs(r.angles.pitch) > 0.5 * kPi - kGimbalMargin;
  return r;
}

inline UnitQuat eulerToQuat(const EulerAngles& e) {
  const double cr = std::cos(0.5 * e.roll), sr = std::sin(0.5 * e.roll);
  const double cp = std::cos(0.5 * e.pitch), sp = std::sin(0.5 * e.pitch);
  const double cy = std::cos(0.5 * e.yaw), sy = std::sin(0.5 * e.yaw);
  UnitQuat q{cr * cp * cy + sr * sp * sy,
             sr * cp * cy - cr * sp * sy,
             cr * sp * cy + sr * cp * sy,
             cr * cp * sy - sr * sp * cy};
  return q.normalized();
}

/// Rotation angle between two orientations, in [0, pi].
inline double quatAngle(const UnitQuat& a, const UnitQuat& b) {
  const UnitQuat e = quatMul(a, b.conj());
  const double v = e.vec().norm();
  return 2.0 * std::asin(std::min(1.0, v));
}

}  // namespace uuvlab
