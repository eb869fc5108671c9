#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "motionkit/core/kinematics.hpp"
#include "motionkit/core/motion.hpp"

// Generators for synthetic fixture motions on the standard skeleton. Used by
// the demo data generator and by tests; not part of any metric path.
namespace motionkit::synthetic {

struct WalkParams {
  std::size_t frames = 100;
  double fps = 20.0;
  double speed = 1.2;          // forward root speed, m/s
  double cadence_hz = 1.0;     // gait cycles per second
  double hip_swing_deg = 25.0;
  double knee_flex_deg = 35.0;
  double arm_swing_deg = 20.0;
  double elbow_bend_deg = 20.0;  // constant flexion, keeps every frame clear of the rest pose
  double heading_rad = 0.0;    // rotation about +z applied to the whole walk
};

// Sinusoidal gait: sagittal hip/knee/shoulder rotations plus forward root
// translation with a small vertical bob.
inline MotionSequence walk(const Skeleton& skeleton, const WalkParams& p, std::string id = "walk") {
  const auto joint = [&](const char* name) { return skeleton.find_joint(name); };
  const Vec3 x_axis{1, 0, 0};
  const UnitQuat heading = UnitQuat::from_axis_angle(convention::up, p.heading_rad);
  std::vector<Frame> frames;
  frames.reserve(p.frames);
  for (std::size_t i = 0; i < p.frames; ++i) {
    const double t = static_cast<double>(i) / p.fps;
    const double phase = 2.0 * std::numbers::pi * p.cadence_hz * t;
    Frame f = rest_frame(skeleton);
    const Vec3 local_root{0.0, p.speed * t, standard_rest_root_height() + 0.02 * std::sin(2.0 * phase)};
    f.root_translation = heading.rotate(local_root);
    f.root_orientation = heading;
    auto set = [&](const char* name, const Vec3& axis, double angle) {
      if (auto j = joint(name)) {
        (*f.joint_rotations)[*skeleton.rotation_slot(*j)] = UnitQuat::from_axis_angle(axis, angle);
      }
    };
    const double hip = deg_to_rad(p.hip_swing_deg) * std::sin(phase);
    const double knee = deg_to_rad(p.knee_flex_deg) * 0.5 * (1.0 - std::cos(phase));
    const double knee_r = deg_to_rad(p.knee_flex_deg) * 0.5 * (1.0 + std::cos(phase));
    const double arm = deg_to_rad(p.arm_swing_deg) * std::sin(phase);
    set("left_hip", x_axis, hip);
    set("right_hip", x_axis, -hip);
    set("left_knee", -x_axis, knee);
    set("right_knee", -x_axis, knee_r);
    set("left_shoulder", x_axis, -arm);
    set("right_shoulder", x_axis, arm);
    set("left_elbow", {0, 0, -1}, deg_to_rad(p.elbow_bend_deg));
    set("right_elbow", {0, 0, 1}, deg_to_rad(p.elbow_bend_deg));
    frames.push_back(std::move(f));
  }
  return MotionSequence(std::move(id), p.fps, skeleton, std::move(frames));
}

// Uniformly random rotation of at most max_angle radians.
inline UnitQuat random_rotation(std::mt19937_64& rng, double max_angle) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec3 axis{gauss(rng), gauss(rng), gauss(rng)};
  if (norm(axis) < 1e-9) axis = {0, 0, 1};
  return UnitQuat::from_axis_angle(axis, max_angle * unit(rng));
}

// Random-walk poses: each frame perturbs the previous local rotations by up
// to `step_angle`, optionally with stored joint positions from FK.
inline MotionSequence random_motion(const Skeleton& skeleton, std::size_t frames, double fps, std::uint64_t seed,
                                    double step_angle = 0.05, bool store_positions = false,
                                    std::string id = "random") {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Frame f = rest_frame(skeleton, {unit(rng), unit(rng), standard_rest_root_height()});
  f.root_orientation = UnitQuat::from_axis_angle(convention::up, std::numbers::pi * unit(rng));
  for (UnitQuat& q : *f.joint_rotations) q = random_rotation(rng, 0.4);
  std::vector<Frame> out;
  out.reserve(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    f.root_translation += Vec3{0.02 * unit(rng), 0.02 * unit(rng), 0.005 * unit(rng)};
    f.root_orientation = UnitQuat::from_axis_angle(convention::up, 0.02 * unit(rng)) * f.root_orientation;
    for (UnitQuat& q : *f.joint_rotations) q = q * random_rotation(rng, step_angle);
    Frame g = f;
    if (store_positions) g.joint_positions = forward_kinematics(skeleton, g);
    out.push_back(std::move(g));
  }
  return MotionSequence(std::move(id), fps, skeleton, std::move(out));
}

// Stores FK positions in every frame.
inline MotionSequence with_fk_positions(const MotionSequence& m) {
  std::vector<Frame> frames = m.frames();
  for (Frame& f : frames) f.joint_positions = forward_kinematics(m.skeleton(), f);
  return m.with_frames(std::move(frames));
}

}  // namespace motionkit::synthetic
