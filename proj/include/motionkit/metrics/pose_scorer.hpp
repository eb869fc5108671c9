#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/motion.hpp"

namespace motionkit {

// Per-pose plausibility score: non-negative, lower is more natural.
// Implementations must be deterministic and safe for concurrent const use.
class PoseScorer {
 public:
  virtual ~PoseScorer() = default;
  virtual double score(const Skeleton& skeleton, const Frame& frame) const = 0;
};

struct SwingTwist {
  double swing = 0.0;  // unsigned, radians
  double twist = 0.0;  // signed about the axis, radians in (-pi, pi]
};

// q = swing * twist, with twist about `axis` (unit).
inline SwingTwist swing_twist(const UnitQuat& q, const Vec3& axis) {
  const UnitQuat h = q.w() < 0.0 ? q.negated() : q;
  const double along = dot(h.vec(), axis);
  if (std::abs(along) < 1e-12 && std::abs(h.w()) < 1e-12) {
    return {std::numbers::pi, 0.0};
  }
  const UnitQuat twist = UnitQuat::normalized(h.w(), axis.x * along, axis.y * along, axis.z * along);
  const double twist_angle = 2.0 * std::atan2(along, h.w());
  const UnitQuat swing = h * twist.conjugate();
  return {swing.angle(), std::remainder(twist_angle, 2.0 * std::numbers::pi)};
}

struct JointLimit {
  Vec3 twist_axis{0.0, 0.0, 1.0};
  double swing_max = std::numbers::pi;
  double twist_min = -std::numbers::pi;
  double twist_max = std::numbers::pi;

  // Radians beyond the allowed swing cone and twist range.
  double violation(const UnitQuat& q) const {
    const SwingTwist st = swing_twist(q, twist_axis / norm(twist_axis));
    double v = std::max(0.0, st.swing - swing_max);
    v += std::max(0.0, st.twist - twist_max) + std::max(0.0, twist_min - st.twist);
    return v;
  }
};

// Rule-based default scorer: mean over all joints of the angular limit
// violation of each joint's local rotation. The root (global orientation)
// and unconstrained joints contribute 0.
class JointLimitScorer final : public PoseScorer {
 public:
  JointLimitScorer() = default;
  explicit JointLimitScorer(std::vector<std::optional<JointLimit>> limits) : limits_(std::move(limits)) {}

  double score(const Skeleton& skeleton, const Frame& frame) const override {
    if (!frame.has_rotations()) throw InsufficientData("insufficient pose data: pose scoring needs joint rotations");
    if (!limits_.empty() && limits_.size() != skeleton.joint_count()) {
      throw InvalidArgument("joint limit table does not match the skeleton");
    }
    if (limits_.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < skeleton.joint_count(); ++j) {
      const auto slot = skeleton.rotation_slot(static_cast<int>(j));
      if (!slot || !limits_[j]) continue;
      total += limits_[j]->violation((*frame.joint_rotations)[*slot]);
    }
    return total / static_cast<double>(skeleton.joint_count());
  }

  const std::vector<std::optional<JointLimit>>& limits() const { return limits_; }

 private:
  std::vector<std::optional<JointLimit>> limits_;
};

// Hinge limits for knees and elbows of a skeleton using standard_skeleton()
// joint names; all other joints are unconstrained. Knee flexion is positive
// twist about -x (shin swings backward); elbow flexion is positive about -z
// for the left arm and +z for the right (forearm swings forward).
inline JointLimitScorer standard_joint_limits(const Skeleton& skeleton) {
  std::vector<std::optional<JointLimit>> limits(skeleton.joint_count());
  const double hinge_swing = deg_to_rad(15.0);
  auto set = [&](const char* name, JointLimit lim) {
    if (auto j = skeleton.find_joint(name)) limits[static_cast<std::size_t>(*j)] = lim;
  };
  const JointLimit knee{{-1.0, 0.0, 0.0}, hinge_swing, 0.0, deg_to_rad(150.0)};
  set("left_knee", knee);
  set("right_knee", knee);
  set("left_elbow", JointLimit{{0.0, 0.0, -1.0}, hinge_swing, 0.0, deg_to_rad(150.0)});
  set("right_elbow", JointLimit{{0.0, 0.0, 1.0}, hinge_swing, 0.0, deg_to_rad(150.0)});
  return JointLimitScorer(std::move(limits));
}

// Mean scorer output over frames.
inline double pose_quality(const MotionSequence& motion, const PoseScorer& scorer) {
  if (motion.frame_count() == 0) throw InvalidArgument("pose_quality needs at least one frame");
  double total = 0.0;
  for (const Frame& f : motion.frames()) total += scorer.score(motion.skeleton(), f);
  return total / static_cast<double>(motion.frame_count());
}

}  // namespace motionkit
