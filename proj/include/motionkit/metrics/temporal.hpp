#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/finite_difference.hpp"
#include "motionkit/core/kinematics.hpp"
#include "motionkit/core/motion.hpp"

namespace motionkit {

// Foot-contact thresholds, in meters above the ground plane.
struct Thresholds {
  double contact_height = 0.05;
  double float_height = 0.10;
  double penetration_eps = 0.0;
  int slide_min_contact_frames = 2;

  void validate() const {
    if (!(contact_height >= 0.0) || !(float_height >= 0.0) || !(penetration_eps >= 0.0)) {
      throw InvalidArgument("thresholds must be non-negative");
    }
    if (float_height < contact_height) throw InvalidArgument("float_height must be >= contact_height");
    if (slide_min_contact_frames < 1) throw InvalidArgument("slide_min_contact_frames must be >= 1");
  }

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

namespace detail {

// positions[joint][frame], the layout finite_difference wants.
inline std::vector<std::vector<Vec3>> joint_tracks(const MotionSequence& motion) {
  const auto per_frame = global_positions(motion);
  std::vector<std::vector<Vec3>> tracks(motion.skeleton().joint_count(), std::vector<Vec3>(per_frame.size()));
  for (std::size_t i = 0; i < per_frame.size(); ++i) {
    for (std::size_t j = 0; j < tracks.size(); ++j) tracks[j][i] = per_frame[i][j];
  }
  return tracks;
}

inline void require_feet(const MotionSequence& motion) {
  if (motion.skeleton().foot_joints().empty()) throw InvalidArgument("skeleton has no foot joints");
}

}  // namespace detail

// Mean geodesic angular acceleration of local joint rotations (rad/s^2) over
// interior frames and non-root joints.
inline double angular_jitter(const MotionSequence& motion) {
  if (motion.frame_count() < 3) throw InvalidArgument("angular jitter needs at least 3 frames");
  if (!motion.has_rotations()) throw InsufficientData("insufficient pose data: angular jitter needs joint rotations");
  const std::size_t slots = motion.skeleton().joint_count() - 1;
  if (slots == 0) return 0.0;
  const double fps = motion.fps();
  const auto& frames = motion.frames();
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < slots; ++s) {
    Vec3 prev_omega;
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
      const UnitQuat& a = (*frames[i].joint_rotations)[s];
      const UnitQuat& b = (*frames[i + 1].joint_rotations)[s];
      const Vec3 omega = (a.conjugate() * b).log() * fps;
      if (i > 0) {
        total += norm(omega - prev_omega) * fps;
        ++count;
      }
      prev_omega = omega;
    }
  }
  return total / static_cast<double>(count);
}

// Mean joint acceleration magnitude (m/s^2) over interior frames and all
// joints, plus angular_weight * angular_jitter().
inline double jitter_degree(const MotionSequence& motion, double angular_weight = 0.0) {
  const std::size_t n = motion.frame_count();
  if (n < 3) throw InvalidArgument("jitter_degree needs at least 3 frames");
  const auto tracks = detail::joint_tracks(motion);
  double total = 0.0;
  for (const auto& track : tracks) {
    const auto acc = finite_difference(track, 2, motion.fps());
    for (std::size_t i = 1; i + 1 < n; ++i) total += norm(acc[i]);
  }
  double value = total / static_cast<double>(tracks.size() * (n - 2));
  if (angular_weight != 0.0) value += angular_weight * angular_jitter(motion);
  return value;
}

// Mean joint speed (m/s) over all frames and joints.
inline double dynamic_degree(const MotionSequence& motion) {
  const std::size_t n = motion.frame_count();
  if (n < 2) throw InvalidArgument("dynamic_degree needs at least 2 frames");
  const auto tracks = detail::joint_tracks(motion);
  double total = 0.0;
  for (const auto& track : tracks) {
    for (const Vec3& v : finite_difference(track, 1, motion.fps())) total += norm(v);
  }
  return total / static_cast<double>(tracks.size() * n);
}

// Fraction of frames in which even the lowest foot joint is above float_height.
inline double foot_floating(const MotionSequence& motion, const Thresholds& thresholds = {}) {
  thresholds.validate();
  detail::require_feet(motion);
  if (motion.frame_count() == 0) throw InvalidArgument("foot_floating needs at least one frame");
  const auto positions = global_positions(motion);
  std::size_t floating = 0;
  for (const auto& frame : positions) {
    double lowest = std::numeric_limits<double>::infinity();
    for (int f : motion.skeleton().foot_joints()) lowest = std::min(lowest, frame[static_cast<std::size_t>(f)].z);
    if (lowest > thresholds.float_height) ++floating;
  }
  return static_cast<double>(floating) / static_cast<double>(positions.size());
}

// Mean over frames of the deepest foot penetration below the ground (meters).
inline double ground_penetration(const MotionSequence& motion, const Thresholds& thresholds = {}) {
  thresholds.validate();
  detail::require_feet(motion);
  if (motion.frame_count() == 0) throw InvalidArgument("ground_penetration needs at least one frame");
  const auto positions = global_positions(motion);
  double total = 0.0;
  for (const auto& frame : positions) {
    double depth = 0.0;
    for (int f : motion.skeleton().foot_joints()) {
      depth = std::max(depth, -(frame[static_cast<std::size_t>(f)].z - thresholds.penetration_eps));
    }
    total += depth;
  }
  return total / static_cast<double>(positions.size());
}

// Mean horizontal foot speed (m/s) over consecutive frame pairs in which the
// foot joint is below contact_height in both frames. Only contact runs of at
// least slide_min_contact_frames frames count; 0 when there are none.
inline double foot_sliding(const MotionSequence& motion, const Thresholds& thresholds = {}) {
  thresholds.validate();
  detail::require_feet(motion);
  const std::size_t n = motion.frame_count();
  if (n < 2) throw InvalidArgument("foot_sliding needs at least 2 frames");
  const auto positions = global_positions(motion);
  const auto min_run = static_cast<std::size_t>(std::max(thresholds.slide_min_contact_frames, 2));

  double total = 0.0;
  std::size_t count = 0;
  for (int f : motion.skeleton().foot_joints()) {
    const auto j = static_cast<std::size_t>(f);
    std::size_t i = 0;
    while (i < n) {
      if (!(positions[i][j].z < thresholds.contact_height)) {
        ++i;
        continue;
      }
      std::size_t end = i;
      while (end + 1 < n && positions[end + 1][j].z < thresholds.contact_height) ++end;
      if (end - i + 1 >= min_run) {
        for (std::size_t k = i; k < end; ++k) {
          total += horizontal_norm(positions[k + 1][j] - positions[k][j]) * motion.fps();
          ++count;
        }
      }
      i = end + 1;
    }
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

}  // namespace motionkit
