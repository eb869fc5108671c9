#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/kinematics.hpp"
#include "motionkit/core/motion.hpp"

namespace motionkit {

enum class FacingStrategy {
  // Horizontal projection of the root orientation's +y axis.
  root_forward,
  // up x (right_hip - left_hip) on the first frame's joint positions.
  hip_vector,
};

struct CanonicalizeOptions {
  bool zero_horizontal = true;
  FacingStrategy facing = FacingStrategy::root_forward;
  int left_hip = -1;
  int right_hip = -1;
};

// Facing direction of a frame, projected onto the ground plane (not normalized).
inline Vec3 facing_direction(const Skeleton& skeleton, const Frame& frame,
                             const CanonicalizeOptions& options = {}) {
  Vec3 f;
  if (options.facing == FacingStrategy::root_forward) {
    f = frame.root_orientation.rotate(convention::forward);
  } else {
    const auto n = static_cast<int>(skeleton.joint_count());
    if (options.left_hip < 0 || options.right_hip < 0 || options.left_hip >= n || options.right_hip >= n) {
      throw InvalidArgument("hip_vector facing needs valid left_hip/right_hip joints");
    }
    const auto pos = frame_positions(skeleton, frame);
    f = cross(convention::up, pos[static_cast<std::size_t>(options.right_hip)] -
                                  pos[static_cast<std::size_t>(options.left_hip)]);
  }
  return {f.x, f.y, 0.0};
}

// Applies one rotation about +z (through the first frame's root) so the first
// frame faces +y; optionally moves the first root to x = y = 0. Heights and
// local rotations are untouched.
inline MotionSequence canonicalize(const MotionSequence& motion, const CanonicalizeOptions& options = {}) {
  if (motion.frame_count() == 0) throw InvalidArgument("cannot canonicalize an empty sequence");
  const Frame& first = motion.frames().front();
  const Vec3 facing = facing_direction(motion.skeleton(), first, options);
  if (horizontal_norm(facing) <= 1e-6) throw InvalidArgument("degenerate facing: forward axis is vertical");

  const double heading = std::atan2(facing.y, facing.x);
  const double delta = std::numbers::pi / 2.0 - heading;
  const UnitQuat turn = UnitQuat::from_axis_angle(convention::up, delta);

  Vec3 pivot = first.has_positions() && !first.has_rotations()
                   ? (*first.joint_positions)[static_cast<std::size_t>(motion.skeleton().root())]
                   : first.root_translation;
  pivot.z = 0.0;
  const Vec3 target = options.zero_horizontal ? Vec3{} : pivot;
  auto apply = [&](const Vec3& p) { return turn.rotate(p - pivot) + target; };

  std::vector<Frame> frames;
  frames.reserve(motion.frame_count());
  for (const Frame& f : motion.frames()) {
    Frame g = f;
    g.root_translation = apply(f.root_translation);
    g.root_orientation = turn * f.root_orientation;
    if (f.has_positions()) {
      for (Vec3& p : *g.joint_positions) p = apply(p);
    }
    frames.push_back(std::move(g));
  }
  return motion.with_frames(std::move(frames));
}

}  // namespace motionkit
