#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/quat.hpp"
#include "motionkit/core/skeleton.hpp"
#include "motionkit/core/vec3.hpp"

namespace motionkit {

// World convention shared by every world-space operation: right-handed,
// +z up, ground plane z = 0, canonical facing +y.
namespace convention {
inline constexpr Vec3 up{0.0, 0.0, 1.0};
inline constexpr Vec3 forward{0.0, 1.0, 0.0};
inline constexpr double ground_height = 0.0;
}  // namespace convention

struct Frame {
  Vec3 root_translation;
  UnitQuat root_orientation;
  // Local (parent-frame) rotations, one per non-root joint, in bone order.
  std::optional<std::vector<UnitQuat>> joint_rotations;
  // World positions, one per joint.
  std::optional<std::vector<Vec3>> joint_positions;

  bool has_rotations() const { return joint_rotations.has_value(); }
  bool has_positions() const { return joint_positions.has_value(); }

  friend bool operator==(const Frame&, const Frame&) = default;
};

class MotionSequence {
 public:
  MotionSequence() = default;

  MotionSequence(std::string id, double fps, Skeleton skeleton, std::vector<Frame> frames)
      : id_(std::move(id)), fps_(fps), skeleton_(std::move(skeleton)), frames_(std::move(frames)) {
    validate();
  }

  const std::string& id() const { return id_; }
  double fps() const { return fps_; }
  const Skeleton& skeleton() const { return skeleton_; }
  const std::vector<Frame>& frames() const { return frames_; }
  std::size_t frame_count() const { return frames_.size(); }
  const Frame& frame(std::size_t i) const { return frames_.at(i); }

  // Time between first and last frame.
  double duration() const {
    return frames_.empty() ? 0.0 : static_cast<double>(frames_.size() - 1) / fps_;
  }

  bool has_rotations() const { return !frames_.empty() && frames_.front().has_rotations(); }
  bool has_positions() const { return !frames_.empty() && frames_.front().has_positions(); }

  // Same skeleton and fps, different frames (validated).
  MotionSequence with_frames(std::vector<Frame> frames) const {
    return MotionSequence(id_, fps_, skeleton_, std::move(frames));
  }
  MotionSequence with_id(std::string id) const {
    MotionSequence m = *this;
    m.id_ = std::move(id);
    return m;
  }

  // Frames [begin, end) as a new sequence.
  MotionSequence slice(std::size_t begin, std::size_t end, std::string id) const {
    if (begin > end || end > frames_.size()) throw InvalidArgument("slice range out of bounds");
    return MotionSequence(std::move(id), fps_, skeleton_,
                          std::vector<Frame>(frames_.begin() + static_cast<std::ptrdiff_t>(begin),
                                             frames_.begin() + static_cast<std::ptrdiff_t>(end)));
  }

  friend bool operator==(const MotionSequence&, const MotionSequence&) = default;

 private:
  void validate() const {
    if (!(fps_ > 0.0) || !std::isfinite(fps_)) throw InvalidArgument("fps must be positive");
    const std::size_t joints = skeleton_.joint_count();
    const bool rot = !frames_.empty() && frames_.front().has_rotations();
    const bool pos = !frames_.empty() && frames_.front().has_positions();
    for (std::size_t i = 0; i < frames_.size(); ++i) {
      const Frame& f = frames_[i];
      const std::string where = "frame " + std::to_string(i) + ": ";
      if (f.has_rotations() != rot || f.has_positions() != pos) {
        throw InvalidArgument(where + "frames are not structurally identical");
      }
      if (!rot && !pos) throw InvalidArgument(where + "frame has neither rotations nor positions");
      if (rot && f.joint_rotations->size() != joints - 1) {
        throw InvalidArgument(where + "expected " + std::to_string(joints - 1) + " joint rotations");
      }
      if (pos && f.joint_positions->size() != joints) {
        throw InvalidArgument(where + "expected " + std::to_string(joints) + " joint positions");
      }
      if (!is_finite(f.root_translation)) throw InvalidArgument(where + "root translation not finite");
      if (pos) {
        for (const Vec3& p : *f.joint_positions) {
          if (!is_finite(p)) throw InvalidArgument(where + "joint position not finite");
        }
      }
    }
  }

  std::string id_;
  double fps_ = 20.0;
  Skeleton skeleton_;
  std::vector<Frame> frames_;
};

}  // namespace motionkit
