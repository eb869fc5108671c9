#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "motionkit/core/error.hpp"
#include "motionkit/core/vec3.hpp"

namespace motionkit {

// Rotation quaternion (w, x, y, z). Every constructor normalizes, so the
// stored value always has unit norm.
class UnitQuat {
 public:
  constexpr UnitQuat() = default;

  // Normalizes (w, x, y, z). Throws on a zero or non-finite input.
  static UnitQuat normalized(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (!(n > 1e-12) || !std::isfinite(n)) {
      throw InvalidArgument("quaternion has zero or non-finite norm");
    }
    UnitQuat q;
    q.w_ = w / n;
    q.x_ = x / n;
    q.y_ = y / n;
    q.z_ = z / n;
    return q;
  }

  static UnitQuat identity() { return {}; }

  // Rotation of `angle` radians about `axis` (need not be unit length).
  static UnitQuat from_axis_angle(const Vec3& axis, double angle) {
    const double n = norm(axis);
    if (!(n > 1e-12)) {
      throw InvalidArgument("rotation axis has zero length");
    }
    const double s = std::sin(angle / 2.0) / n;
    return normalized(std::cos(angle / 2.0), axis.x * s, axis.y * s, axis.z * s);
  }

  // Inverse of log(): rotation vector (axis * angle) to quaternion.
  static UnitQuat exp(const Vec3& rotvec) {
    const double angle = norm(rotvec);
    if (angle < 1e-12) {
      return normalized(1.0, rotvec.x / 2.0, rotvec.y / 2.0, rotvec.z / 2.0);
    }
    return from_axis_angle(rotvec, angle);
  }

  constexpr double w() const { return w_; }
  constexpr double x() const { return x_; }
  constexpr double y() const { return y_; }
  constexpr double z() const { return z_; }
  constexpr Vec3 vec() const { return {x_, y_, z_}; }

  UnitQuat conjugate() const { return raw(w_, -x_, -y_, -z_); }
  UnitQuat negated() const { return raw(-w_, -x_, -y_, -z_); }

  friend UnitQuat operator*(const UnitQuat& a, const UnitQuat& b) {
    return normalized(a.w_ * b.w_ - a.x_ * b.x_ - a.y_ * b.y_ - a.z_ * b.z_,
                      a.w_ * b.x_ + a.x_ * b.w_ + a.y_ * b.z_ - a.z_ * b.y_,
                      a.w_ * b.y_ - a.x_ * b.z_ + a.y_ * b.w_ + a.z_ * b.x_,
                      a.w_ * b.z_ + a.x_ * b.y_ - a.y_ * b.x_ + a.z_ * b.w_);
  }

  Vec3 rotate(const Vec3& v) const {
    // v' = v + 2w(u x v) + 2 u x (u x v)
    const Vec3 u = vec();
    const Vec3 t = 2.0 * cross(u, v);
    return v + w_ * t + cross(u, t);
  }

  // Rotation vector with angle in [0, pi].
  Vec3 log() const {
    const UnitQuat q = w_ < 0.0 ? negated() : *this;
    const Vec3 u = q.vec();
    const double s = norm(u);
    if (s < 1e-12) {
      return 2.0 * u;
    }
    const double angle = 2.0 * std::atan2(s, q.w_);
    return u * (angle / s);
  }

  // Geodesic rotation angle in [0, pi].
  double angle() const {
    return 2.0 * std::atan2(norm(vec()), std::abs(w_));
  }

  friend constexpr bool operator==(const UnitQuat&, const UnitQuat&) = default;

 private:
  static UnitQuat raw(double w, double x, double y, double z) {
    UnitQuat q;
    q.w_ = w;
    q.x_ = x;
    q.y_ = y;
    q.z_ = z;
    return q;
  }

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

inline double dot(const UnitQuat& a, const UnitQuat& b) {
  return a.w() * b.w() + a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
}

// Geodesic distance between rotations (q and -q are the same rotation).
inline double angular_distance(const UnitQuat& a, const UnitQuat& b) {
  return (a.conjugate() * b).angle();
}

// Shortest-arc spherical interpolation.
inline UnitQuat slerp(const UnitQuat& a, UnitQuat b, double u) {
  double c = dot(a, b);
  if (c < 0.0) {
    b = b.negated();
    c = -c;
  }
  if (c > 1.0 - 1e-12) {
    return UnitQuat::normalized(a.w() + (b.w() - a.w()) * u, a.x() + (b.x() - a.x()) * u,
                                a.y() + (b.y() - a.y()) * u, a.z() + (b.z() - a.z()) * u);
  }
  const double theta = std::acos(std::clamp(c, -1.0, 1.0));
  const double s = std::sin(theta);
  const double ka = std::sin((1.0 - u) * theta) / s;
  const double kb = std::sin(u * theta) / s;
  return UnitQuat::normalized(ka * a.w() + kb * b.w(), ka * a.x() + kb * b.x(),
                              ka * a.y() + kb * b.y(), ka * a.z() + kb * b.z());
}

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace motionkit
