#pragma once

#include <cmath>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/motion.hpp"

namespace motionkit {

// Blend of two structurally identical frames; u = 0 gives a, u = 1 gives b.
inline Frame interpolate_frames(const Frame& a, const Frame& b, double u) {
  Frame f;
  f.root_translation = lerp(a.root_translation, b.root_translation, u);
  f.root_orientation = slerp(a.root_orientation, b.root_orientation, u);
  if (a.has_rotations()) {
    std::vector<UnitQuat> rot(a.joint_rotations->size());
    for (std::size_t j = 0; j < rot.size(); ++j) rot[j] = slerp((*a.joint_rotations)[j], (*b.joint_rotations)[j], u);
    f.joint_rotations = std::move(rot);
  }
  if (a.has_positions()) {
    std::vector<Vec3> pos(a.joint_positions->size());
    for (std::size_t j = 0; j < pos.size(); ++j) pos[j] = lerp((*a.joint_positions)[j], (*b.joint_positions)[j], u);
    f.joint_positions = std::move(pos);
  }
  return f;
}

// Resamples to target_fps over the same span. Output frame k sits at time
// k / target_fps; the last output frame is the last input frame, so the
// span differs from the input's by at most half a target period.
inline MotionSequence resample(const MotionSequence& motion, double target_fps) {
  if (!(target_fps > 0.0) || !std::isfinite(target_fps)) throw InvalidArgument("target_fps must be positive");
  const std::size_t n = motion.frame_count();
  if (n < 2) throw InvalidArgument("cannot resample a sequence with fewer than 2 frames");

  const double ratio = motion.fps() / target_fps;
  const auto intervals = static_cast<std::size_t>(
      std::llround(static_cast<double>(n - 1) * target_fps / motion.fps()));
  const std::size_t m = std::max<std::size_t>(intervals, 1) + 1;

  const auto& src = motion.frames();
  std::vector<Frame> out;
  out.reserve(m);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double u = static_cast<double>(k) * ratio;
    const auto i0 = static_cast<std::size_t>(std::floor(u));
    if (i0 >= n - 1) {
      out.push_back(src.back());
      continue;
    }
    const double frac = u - static_cast<double>(i0);
    out.push_back(frac == 0.0 ? src[i0] : interpolate_frames(src[i0], src[i0 + 1], frac));
  }
  out.push_back(src.back());
  return MotionSequence(motion.id(), target_fps, motion.skeleton(), std::move(out));
}

}  // namespace motionkit
