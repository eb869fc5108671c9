#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/kinematics.hpp"
#include "motionkit/metrics/bvh.hpp"
#include "motionkit/metrics/capsule.hpp"

namespace motionkit {

using BonePair = std::pair<std::size_t, std::size_t>;

enum class BroadPhase { all_pairs, bvh };

struct BodyPenetration {
  double mean_pairs_per_frame = 0.0;
  double frame_fraction = 0.0;
};

// One capsule per bone, parent joint to child joint.
inline std::vector<Capsule> bone_capsules(const Skeleton& skeleton, const std::vector<Vec3>& positions) {
  if (!skeleton.has_capsule_radii()) throw InvalidArgument("skeleton has no capsule radii");
  std::vector<Capsule> out;
  out.reserve(skeleton.bone_count());
  for (std::size_t b = 0; b < skeleton.bone_count(); ++b) {
    const Bone& bone = skeleton.bones()[b];
    out.push_back({positions[static_cast<std::size_t>(bone.parent)], positions[static_cast<std::size_t>(bone.child)],
                   skeleton.capsule_radii()[b]});
  }
  return out;
}

inline bool bones_share_joint(const Bone& x, const Bone& y) {
  return x.parent == y.parent || x.parent == y.child || x.child == y.parent || x.child == y.child;
}

// Unordered bone pairs (i < j, sorted) whose capsules interpenetrate,
// skipping pairs that share a joint.
inline std::vector<BonePair> penetrating_pairs(const Skeleton& skeleton, const std::vector<Vec3>& positions,
                                               BroadPhase broad_phase = BroadPhase::bvh) {
  const auto capsules = bone_capsules(skeleton, positions);
  const auto& bones = skeleton.bones();
  std::vector<BonePair> hits;
  auto test = [&](std::size_t i, std::size_t j) {
    if (bones_share_joint(bones[i], bones[j])) return;
    if (capsule_distance(capsules[i], capsules[j]) < 0.0) hits.emplace_back(i, j);
  };

  if (broad_phase == BroadPhase::all_pairs) {
    for (std::size_t i = 0; i < capsules.size(); ++i) {
      for (std::size_t j = i + 1; j < capsules.size(); ++j) test(i, j);
    }
    return hits;
  }

  std::vector<Aabb> boxes;
  boxes.reserve(capsules.size());
  for (const Capsule& c : capsules) {
    // Slack so rounding in the narrow phase can never be culled here.
    const double r = c.radius * (1.0 + 1e-9) + 1e-12;
    const Vec3 lo{std::min(c.a.x, c.b.x) - r, std::min(c.a.y, c.b.y) - r, std::min(c.a.z, c.b.z) - r};
    const Vec3 hi{std::max(c.a.x, c.b.x) + r, std::max(c.a.y, c.b.y) + r, std::max(c.a.z, c.b.z) + r};
    boxes.push_back({lo, hi});
  }
  AabbTree(std::move(boxes)).for_each_overlapping_pair(test);
  std::sort(hits.begin(), hits.end());
  return hits;
}

inline BodyPenetration body_penetration(const MotionSequence& motion, BroadPhase broad_phase = BroadPhase::bvh) {
  if (!motion.skeleton().has_capsule_radii()) throw InvalidArgument("body_penetration needs capsule radii");
  if (motion.frame_count() == 0) throw InvalidArgument("body_penetration needs at least one frame");
  std::size_t pairs = 0;
  std::size_t frames_hit = 0;
  for (const Frame& f : motion.frames()) {
    const auto hits = penetrating_pairs(motion.skeleton(), frame_positions(motion.skeleton(), f), broad_phase);
    pairs += hits.size();
    if (!hits.empty()) ++frames_hit;
  }
  const auto n = static_cast<double>(motion.frame_count());
  return {static_cast<double>(pairs) / n, static_cast<double>(frames_hit) / n};
}

}  // namespace motionkit
