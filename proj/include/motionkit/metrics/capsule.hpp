#pragma once

#include <algorithm>
#include <cmath>

#include "motionkit/core/error.hpp"
#include "motionkit/core/vec3.hpp"

namespace motionkit {

struct Capsule {
  Vec3 a;
  Vec3 b;
  double radius = 0.0;
};

struct SegmentClosest {
  double s = 0.0;  // parameter on the first segment
  double t = 0.0;  // parameter on the second segment
  double distance = 0.0;
};

// Closest points between segments p1-q1 and p2-q2 (Ericson, RTCD 5.1.9),
// covering parallel and point-like segments.
inline SegmentClosest closest_segment_points(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
  constexpr double eps = 1e-14;
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  double s = 0.0;
  double t = 0.0;
  if (a <= eps && e <= eps) {
    // both points
  } else if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom > eps * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  const Vec3 c1 = p1 + d1 * s;
  const Vec3 c2 = p2 + d2 * t;
  return {s, t, distance(c1, c2)};
}

// Surface distance between two capsules; negative values are penetration depth.
inline double capsule_distance(const Capsule& x, const Capsule& y) {
  if (!(x.radius > 0.0) || !(y.radius > 0.0)) throw InvalidArgument("capsule radius must be positive");
  return closest_segment_points(x.a, x.b, y.a, y.b).distance - (x.radius + y.radius);
}

}  // namespace motionkit
