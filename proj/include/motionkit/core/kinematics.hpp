#pragma once

#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/motion.hpp"

namespace motionkit {

struct GlobalPose {
  std::vector<Vec3> positions;
  std::vector<UnitQuat> orientations;
};

// World positions and orientations of every joint from root pose + local
// rotations. p[j] = p[parent] + R[parent] * rest_offset[j], R[j] = R[parent] * q[j].
inline GlobalPose forward_kinematics_pose(const Skeleton& skeleton, const Frame& frame) {
  if (!frame.has_rotations()) throw InsufficientData("insufficient pose data: frame has no joint rotations");
  const auto& local = *frame.joint_rotations;
  if (local.size() + 1 != skeleton.joint_count()) {
    throw InsufficientData("insufficient pose data: rotation count does not match skeleton");
  }
  GlobalPose pose;
  pose.positions.resize(skeleton.joint_count());
  pose.orientations.resize(skeleton.joint_count());
  for (int j : skeleton.traversal_order()) {
    const auto uj = static_cast<std::size_t>(j);
    if (j == skeleton.root()) {
      pose.positions[uj] = frame.root_translation;
      pose.orientations[uj] = frame.root_orientation;
      continue;
    }
    const auto p = static_cast<std::size_t>(skeleton.parent(j));
    pose.positions[uj] = pose.positions[p] + pose.orientations[p].rotate(skeleton.rest_offsets()[uj]);
    pose.orientations[uj] = pose.orientations[p] * local[*skeleton.rotation_slot(j)];
  }
  return pose;
}

inline std::vector<Vec3> forward_kinematics(const Skeleton& skeleton, const Frame& frame) {
  return forward_kinematics_pose(skeleton, frame).positions;
}

// World joint positions of one frame: stored positions when present,
// otherwise forward kinematics.
inline std::vector<Vec3> frame_positions(const Skeleton& skeleton, const Frame& frame) {
  if (frame.has_positions()) return *frame.joint_positions;
  return forward_kinematics(skeleton, frame);
}

// positions[frame][joint] for the whole sequence.
inline std::vector<std::vector<Vec3>> global_positions(const MotionSequence& motion) {
  std::vector<std::vector<Vec3>> out;
  out.reserve(motion.frame_count());
  for (const Frame& f : motion.frames()) out.push_back(frame_positions(motion.skeleton(), f));
  return out;
}

// Rest pose frame: identity rotations, root at `root_translation`.
inline Frame rest_frame(const Skeleton& skeleton, const Vec3& root_translation = {}) {
  Frame f;
  f.root_translation = root_translation;
  f.joint_rotations = std::vector<UnitQuat>(skeleton.joint_count() - 1);
  return f;
}

}  // namespace motionkit
