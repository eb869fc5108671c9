#pragma once

#include <set>
#include <string>

#include "motionkit/metrics/report.hpp"

namespace motionkit {

struct FilterConfig {
  double clip_len_s = 5.0;
  double min_len_s = 3.0;
  double target_fps = 20.0;
  double tpose_angle_eps = 0.05;  // radians
  // Calibrated on synthetic walks (jitter ~1-5 m/s^2, speed ~0.5-1.5 m/s)
  // and white-noise clips; real corpora need their own values.
  double max_jitter = 40.0;   // m/s^2
  double min_dynamic = 0.05;  // m/s
  // Gaussian smoothing (in frames) applied to video-derived sources; 0 = off.
  double video_smooth_sigma = 0.0;
  Thresholds thresholds;

  void validate() const {
    if (!(min_len_s > 0.0)) throw InvalidArgument("min_len_s must be > 0");
    if (!(clip_len_s >= min_len_s)) throw InvalidArgument("clip_len_s must be >= min_len_s");
    if (!(target_fps > 0.0)) throw InvalidArgument("target_fps must be > 0");
    if (!(tpose_angle_eps >= 0.0)) throw InvalidArgument("tpose_angle_eps must be >= 0");
    if (!(max_jitter >= 0.0) || !(min_dynamic >= 0.0)) throw InvalidArgument("quality thresholds must be >= 0");
    if (!(video_smooth_sigma >= 0.0)) throw InvalidArgument("video_smooth_sigma must be >= 0");
    thresholds.validate();
  }

  friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

inline ordered_json filter_config_to_json(const FilterConfig& c) {
  ordered_json j;
  j["clip_len_s"] = c.clip_len_s;
  j["min_len_s"] = c.min_len_s;
  j["target_fps"] = c.target_fps;
  j["tpose_angle_eps"] = c.tpose_angle_eps;
  j["max_jitter"] = c.max_jitter;
  j["min_dynamic"] = c.min_dynamic;
  j["video_smooth_sigma"] = c.video_smooth_sigma;
  j["thresholds"] = thresholds_to_json(c.thresholds);
  return j;
}

// Overlays the keys present in j onto `base`. Unknown keys are rejected so
// that typos do not silently fall back to defaults.
inline FilterConfig filter_config_from_json(const json& j, FilterConfig c = {}) {
  if (!j.is_object()) throw ParseError("curation config must be an object");
  static const std::set<std::string> known = {"clip_len_s",  "min_len_s",   "target_fps",         "tpose_angle_eps",
                                              "max_jitter",  "min_dynamic", "video_smooth_sigma", "thresholds"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ParseError("curation config: unknown key '" + key + "'");
  }
  try {
    c.clip_len_s = j.value("clip_len_s", c.clip_len_s);
    c.min_len_s = j.value("min_len_s", c.min_len_s);
    c.target_fps = j.value("target_fps", c.target_fps);
    c.tpose_angle_eps = j.value("tpose_angle_eps", c.tpose_angle_eps);
    c.max_jitter = j.value("max_jitter", c.max_jitter);
    c.min_dynamic = j.value("min_dynamic", c.min_dynamic);
    c.video_smooth_sigma = j.value("video_smooth_sigma", c.video_smooth_sigma);
    if (j.contains("thresholds")) c.thresholds = thresholds_from_json(j.at("thresholds"), c.thresholds);
  } catch (const json::exception& e) {
    throw ParseError(std::string("curation config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace motionkit
