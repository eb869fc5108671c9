#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/vec3.hpp"

namespace motionkit {

inline constexpr int kNoParent = -1;

// A bone connects a non-root joint to its parent. Bones are numbered in joint
// order with the root skipped, which is also the order of per-frame local
// rotations and of capsule radii.
struct Bone {
  int parent = kNoParent;
  int child = kNoParent;
};

// Immutable joint hierarchy. The constructor validates the tree and
// precomputes a parent-before-child traversal order.
class Skeleton {
 public:
  Skeleton() = default;

  Skeleton(std::vector<std::string> joint_names, std::vector<int> parents,
           std::vector<Vec3> rest_offsets, std::set<int> foot_joints,
           std::vector<double> capsule_radii = {})
      : names_(std::move(joint_names)),
        parents_(std::move(parents)),
        offsets_(std::move(rest_offsets)),
        feet_(std::move(foot_joints)),
        radii_(std::move(capsule_radii)) {
    validate();
  }

  std::size_t joint_count() const { return parents_.size(); }
  std::size_t bone_count() const { return bones_.size(); }

  const std::vector<std::string>& joint_names() const { return names_; }
  const std::vector<int>& parents() const { return parents_; }
  const std::vector<Vec3>& rest_offsets() const { return offsets_; }
  const std::set<int>& foot_joints() const { return feet_; }
  const std::vector<double>& capsule_radii() const { return radii_; }
  bool has_capsule_radii() const { return !radii_.empty(); }

  int root() const { return root_; }
  int parent(int joint) const { return parents_.at(static_cast<std::size_t>(joint)); }
  const std::vector<int>& traversal_order() const { return order_; }
  const std::vector<Bone>& bones() const { return bones_; }

  // Index into Frame::joint_rotations for a joint, or nullopt for the root.
  std::optional<std::size_t> rotation_slot(int joint) const {
    if (joint == root_) return std::nullopt;
    return static_cast<std::size_t>(joint > root_ ? joint - 1 : joint);
  }

  // First child in joint order, if any.
  std::optional<int> first_child(int joint) const {
    for (std::size_t j = 0; j < parents_.size(); ++j) {
      if (parents_[j] == joint) return static_cast<int>(j);
    }
    return std::nullopt;
  }

  std::optional<int> find_joint(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<int>(it - names_.begin());
  }

  friend bool operator==(const Skeleton& a, const Skeleton& b) {
    return a.names_ == b.names_ && a.parents_ == b.parents_ && a.offsets_ == b.offsets_ &&
           a.feet_ == b.feet_ && a.radii_ == b.radii_;
  }

 private:
  void validate() {
    const std::size_t n = parents_.size();
    if (n == 0) throw InvalidArgument("skeleton has no joints");
    if (names_.size() != n) throw InvalidArgument("joint_names length differs from parents");
    if (offsets_.size() != n) throw InvalidArgument("rest_offsets length differs from parents");

    root_ = kNoParent;
    for (std::size_t j = 0; j < n; ++j) {
      const int p = parents_[j];
      if (p == kNoParent) {
        if (root_ != kNoParent) throw InvalidArgument("skeleton has more than one root");
        root_ = static_cast<int>(j);
      } else if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == j) {
        throw InvalidArgument("joint " + std::to_string(j) + " has invalid parent " +
                              std::to_string(p));
      }
      if (!is_finite(offsets_[j])) {
        throw InvalidArgument("rest offset of joint " + std::to_string(j) + " is not finite");
      }
    }
    if (root_ == kNoParent) throw InvalidArgument("skeleton has no root");

    // Breadth-first from the root; anything unreached sits on a cycle.
    std::vector<std::vector<int>> children(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (parents_[j] != kNoParent) children[static_cast<std::size_t>(parents_[j])].push_back(static_cast<int>(j));
    }
    order_.clear();
    order_.push_back(root_);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      for (int c : children[static_cast<std::size_t>(order_[head])]) order_.push_back(c);
    }
    if (order_.size() != n) throw InvalidArgument("parents contain a cycle");

    for (int f : feet_) {
      if (f < 0 || static_cast<std::size_t>(f) >= n) {
        throw InvalidArgument("foot joint " + std::to_string(f) + " out of range");
      }
    }

    bones_.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (static_cast<int>(j) != root_) bones_.push_back({parents_[j], static_cast<int>(j)});
    }
    if (!radii_.empty()) {
      if (radii_.size() != bones_.size()) {
        throw InvalidArgument("capsule_radii must have one entry per bone (" +
                              std::to_string(bones_.size()) + ")");
      }
      for (double r : radii_) {
        if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("capsule radii must be positive");
      }
    }
  }

  std::vector<std::string> names_;
  std::vector<int> parents_;
  std::vector<Vec3> offsets_;
  std::set<int> feet_;
  std::vector<double> radii_;

  int root_ = kNoParent;
  std::vector<int> order_;
  std::vector<Bone> bones_;
};

// 22-joint body proxy (SMPL body joint topology) in the z-up, +y-facing
// convention; left joints sit at negative x. Root height places the foot
// joints on the ground in the rest pose: see standard_rest_root_height().
inline Skeleton standard_skeleton() {
  std::vector<std::string> names = {
      "pelvis",     "left_hip",       "right_hip",      "spine1",     "left_knee",  "right_knee",
      "spine2",     "left_ankle",     "right_ankle",    "spine3",     "left_foot",  "right_foot",
      "neck",       "left_collar",    "right_collar",   "head",       "left_shoulder",
      "right_shoulder", "left_elbow", "right_elbow",    "left_wrist", "right_wrist"};
  std::vector<int> parents = {-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19};
  std::vector<Vec3> offsets = {
      {0, 0, 0},         {-0.09, 0, -0.06},  {0.09, 0, -0.06},  {0, 0, 0.10},
      {0, 0, -0.40},     {0, 0, -0.40},      {0, 0, 0.12},      {0, 0, -0.40},
      {0, 0, -0.40},     {0, 0, 0.12},       {0, 0.12, -0.04},  {0, 0.12, -0.04},
      {0, 0, 0.16},      {-0.07, 0, 0.10},   {0.07, 0, 0.10},   {0, 0, 0.12},
      {-0.12, 0, 0.02},  {0.12, 0, 0.02},    {-0.26, 0, 0},     {0.26, 0, 0},
      {-0.25, 0, 0},     {0.25, 0, 0}};
  // Radii per bone, named by the bone's child joint.
  std::vector<double> radii = {
      0.04,  // left_hip
      0.04,  // right_hip
      0.045, // spine1
      0.05,  // left_knee (thigh)
      0.05,  // right_knee
      0.045, // spine2
      0.04,  // left_ankle (shin)
      0.04,  // right_ankle
      0.045, // spine3
      0.025, // left_foot
      0.025, // right_foot
      0.03,  // neck
      0.025, // left_collar
      0.025, // right_collar
      0.04,  // head
      0.025, // left_shoulder
      0.025, // right_shoulder
      0.035, // left_elbow (upper arm)
      0.035, // right_elbow
      0.03,  // left_wrist (forearm)
      0.03,  // right_wrist
  };
  return Skeleton(std::move(names), std::move(parents), std::move(offsets), {7, 8, 10, 11},
                  std::move(radii));
}

// Pelvis height at which the standard skeleton's rest pose has its foot
// joints exactly on the ground plane.
inline constexpr double standard_rest_root_height() { return 0.90; }

}  // namespace motionkit
