#pragma once

#include <span>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/core/vec3.hpp"

namespace motionkit {

// Time derivative of a sampled trajectory, same length as the input.
// order 1: central differences inside, one-sided at the ends (m/s).
// order 2: second central difference (m/s^2); each end copies its nearest
// interior value.
inline std::vector<Vec3> finite_difference(std::span<const Vec3> positions, int order, double fps) {
  if (order != 1 && order != 2) throw InvalidArgument("finite_difference order must be 1 or 2");
  if (!(fps > 0.0)) throw InvalidArgument("fps must be positive");
  const std::size_t n = positions.size();
  if (n <= static_cast<std::size_t>(order)) {
    throw InvalidArgument("finite_difference of order " + std::to_string(order) + " needs more than " +
                          std::to_string(order) + " frames");
  }
  std::vector<Vec3> out(n);
  if (order == 1) {
    out.front() = (positions[1] - positions[0]) * fps;
    out.back() = (positions[n - 1] - positions[n - 2]) * fps;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (positions[i + 1] - positions[i - 1]) * (0.5 * fps);
    return out;
  }
  const double fps2 = fps * fps;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (positions[i + 1] - 2.0 * positions[i] + positions[i - 1]) * fps2;
  }
  out.front() = out[1];
  out.back() = out[n - 2];
  return out;
}

}  // namespace motionkit
