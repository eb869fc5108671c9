#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/motion.hpp"

namespace motionkit {

// Adds i.i.d. N(0, sigma^2) noise to root translation, joint positions and
// every quaternion component (then renormalizes). Deterministic per seed.
inline MotionSequence perturb(const MotionSequence& motion, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be non-negative");
  if (sigma == 0.0) return motion;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  auto jitter_vec = [&](Vec3& v) {
    v.x += noise(rng);
    v.y += noise(rng);
    v.z += noise(rng);
  };
  auto jitter_quat = [&](UnitQuat& q) {
    const double w = q.w() + noise(rng);
    const double x = q.x() + noise(rng);
    const double y = q.y() + noise(rng);
    const double z = q.z() + noise(rng);
    q = UnitQuat::normalized(w, x, y, z);
  };

  std::vector<Frame> frames = motion.frames();
  for (Frame& f : frames) {
    jitter_vec(f.root_translation);
    jitter_quat(f.root_orientation);
    if (f.has_rotations()) {
      for (UnitQuat& q : *f.joint_rotations) jitter_quat(q);
    }
    if (f.has_positions()) {
      for (Vec3& p : *f.joint_positions) jitter_vec(p);
    }
  }
  return motion.with_frames(std::move(frames));
}

}  // namespace motionkit
