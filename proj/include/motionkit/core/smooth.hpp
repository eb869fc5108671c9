#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/motion.hpp"

namespace motionkit {

// Normalized Gaussian weights for offsets -r..r with r = ceil(3 sigma).
inline std::vector<double> gaussian_kernel(double sigma_frames) {
  if (!(sigma_frames >= 0.0) || !std::isfinite(sigma_frames)) {
    throw InvalidArgument("sigma_frames must be non-negative");
  }
  if (sigma_frames == 0.0) return {1.0};
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma_frames));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * static_cast<double>(k * k) / (sigma_frames * sigma_frames));
    w[static_cast<std::size_t>(k + radius)] = v;
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

namespace detail {

// Point reflection about the end samples: e[-k] = 2 p[0] - p[k], and the same
// at the far end. Keeps constant and linear channels exactly fixed.
template <class Get>
Vec3 reflected_sample(std::ptrdiff_t i, std::ptrdiff_t n, Get&& get) {
  Vec3 offset{};
  double sign = 1.0;
  while (i < 0 || i >= n) {
    if (i < 0) {
      offset += sign * 2.0 * get(0);
      sign = -sign;
      i = -i;
    } else {
      offset += sign * 2.0 * get(n - 1);
      sign = -sign;
      i = 2 * (n - 1) - i;
    }
  }
  return offset + sign * get(i);
}

template <class Get>
std::vector<Vec3> smooth_channel(std::ptrdiff_t n, const std::vector<double>& w, Get&& get) {
  const auto radius = static_cast<std::ptrdiff_t>(w.size() / 2);
  std::vector<Vec3> out(static_cast<std::size_t>(n));
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Vec3 centre = get(i);
    Vec3 acc{};
    for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
      acc += w[static_cast<std::size_t>(k + radius)] * (reflected_sample(i + k, n, get) - centre);
    }
    out[static_cast<std::size_t>(i)] = centre + acc;
  }
  return out;
}

// Componentwise weighted average over replicated edges, each neighbour
// flipped into the centre sample's hemisphere, then renormalized.
template <class Get>
std::vector<UnitQuat> smooth_rotation_channel(std::ptrdiff_t n, const std::vector<double>& w, Get&& get) {
  const auto radius = static_cast<std::ptrdiff_t>(w.size() / 2);
  std::vector<UnitQuat> out(static_cast<std::size_t>(n));
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const UnitQuat centre = get(i);
    double a[4] = {0, 0, 0, 0};
    for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
      const std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(i + k, 0, n - 1);
      UnitQuat q = get(idx);
      if (dot(q, centre) < 0.0) q = q.negated();
      const double wk = w[static_cast<std::size_t>(k + radius)];
      a[0] += wk * q.w();
      a[1] += wk * q.x();
      a[2] += wk * q.y();
      a[3] += wk * q.z();
    }
    out[static_cast<std::size_t>(i)] = UnitQuat::normalized(a[0], a[1], a[2], a[3]);
  }
  return out;
}

}  // namespace detail

// Temporal Gaussian smoothing of every channel. Positional channels
// (root translation, joint positions) use point-reflected edges; rotations
// use replicated edges. sigma 0 returns the input unchanged.
inline MotionSequence gaussian_smooth(const MotionSequence& motion, double sigma_frames) {
  const std::vector<double> w = gaussian_kernel(sigma_frames);
  if (w.size() == 1 || motion.frame_count() < 2) return motion;

  const auto n = static_cast<std::ptrdiff_t>(motion.frame_count());
  const auto& src = motion.frames();
  auto at = [&](std::ptrdiff_t i) -> const Frame& { return src[static_cast<std::size_t>(i)]; };
  std::vector<Frame> frames = src;

  const auto root = detail::smooth_channel(n, w, [&](std::ptrdiff_t i) { return at(i).root_translation; });
  const auto root_q = detail::smooth_rotation_channel(n, w, [&](std::ptrdiff_t i) { return at(i).root_orientation; });
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    frames[static_cast<std::size_t>(i)].root_translation = root[static_cast<std::size_t>(i)];
    frames[static_cast<std::size_t>(i)].root_orientation = root_q[static_cast<std::size_t>(i)];
  }
  if (motion.has_positions()) {
    const std::size_t joints = motion.skeleton().joint_count();
    for (std::size_t j = 0; j < joints; ++j) {
      const auto ch = detail::smooth_channel(n, w, [&](std::ptrdiff_t i) { return (*at(i).joint_positions)[j]; });
      for (std::ptrdiff_t i = 0; i < n; ++i) (*frames[static_cast<std::size_t>(i)].joint_positions)[j] = ch[static_cast<std::size_t>(i)];
    }
  }
  if (motion.has_rotations()) {
    const std::size_t slots = motion.skeleton().joint_count() - 1;
    for (std::size_t j = 0; j < slots; ++j) {
      const auto ch = detail::smooth_rotation_channel(n, w, [&](std::ptrdiff_t i) { return (*at(i).joint_rotations)[j]; });
      for (std::ptrdiff_t i = 0; i < n; ++i) (*frames[static_cast<std::size_t>(i)].joint_rotations)[j] = ch[static_cast<std::size_t>(i)];
    }
  }
  return motion.with_frames(std::move(frames));
}

}  // namespace motionkit
