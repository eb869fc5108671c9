#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "motionkit/core/error.hpp"

namespace motionkit::bench {

inline constexpr double kRadarFloor = 0.2;

// Divide by the maximum, take reciprocals when lower is better, then map the
// best model to 1.0 and the worst to 0.2. All-equal inputs map to 1.0.
inline std::vector<double> radar_normalize(const std::vector<double>& values, bool higher_is_better) {
  if (values.size() < 2) throw InvalidArgument("radar normalization needs at least 2 models");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("radar input must be finite");
    if (!higher_is_better && v <= 0.0) throw InvalidArgument("lower-is-better radar input must be > 0");
  }
  std::vector<double> s = values;
  const double mx = *std::max_element(s.begin(), s.end());
  // A positive rescale is absorbed by the affine map; only the
  // lower-is-better reciprocal depends on it.
  if (mx > 0.0) {
    for (double& v : s) v /= mx;
  }
  if (!higher_is_better) {
    for (double& v : s) v = 1.0 / v;
  }
  const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(s.size(), 1.0);
  if (hi - lo <= 0.0) return out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = s[i] == hi ? 1.0 : s[i] == lo ? kRadarFloor : kRadarFloor + (1.0 - kRadarFloor) * (s[i] - lo) / (hi - lo);
  }
  return out;
}

inline std::map<std::string, double> radar_normalize(const std::map<std::string, double>& per_model, bool higher_is_better) {
  std::vector<double> v;
  for (const auto& [_, x] : per_model) v.push_back(x);
  const auto n = radar_normalize(v, higher_is_better);
  std::map<std::string, double> out;
  std::size_t i = 0;
  for (const auto& [m, _] : per_model) out[m] = n[i++];
  return out;
}

}  // namespace motionkit::bench
