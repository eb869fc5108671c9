#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "motionkit/curation/config.hpp"

namespace motionkit {

namespace reason {
inline constexpr const char* parse_error = "parse_error";
inline constexpr const char* invalid_motion = "invalid_motion";
inline constexpr const char* too_short = "too_short";
inline constexpr const char* all_tpose = "all_tpose";
inline constexpr const char* jitter = "jitter";
inline constexpr const char* static_motion = "static";
}  // namespace reason

struct FrameRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  std::size_t size() const { return end - begin; }
  friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

// Mean geodesic angle of the local joint rotations to identity (the rest
// pose). The root's global orientation is ignored.
inline double rest_pose_distance(const Frame& f) {
  if (!f.has_rotations() || f.joint_rotations->empty()) return 0.0;
  double total = 0.0;
  for (const UnitQuat& q : *f.joint_rotations) total += q.angle();
  return total / static_cast<double>(f.joint_rotations->size());
}

inline bool is_tpose_frame(const Frame& f, double eps) {
  return f.has_rotations() && !f.joint_rotations->empty() && rest_pose_distance(f) < eps;
}

// Range left after removing the leading and trailing T-pose runs; empty
// when every frame is a T-pose. Motions without rotations are untouched.
inline FrameRange tpose_trim_range(const MotionSequence& m, double eps) {
  std::size_t b = 0, e = m.frame_count();
  while (b < e && is_tpose_frame(m.frame(b), eps)) ++b;
  while (e > b && is_tpose_frame(m.frame(e - 1), eps)) --e;
  return {b, e};
}

// nullopt when the whole motion is T-pose.
inline std::optional<MotionSequence> trim_tpose(const MotionSequence& m, double eps) {
  const FrameRange r = tpose_trim_range(m, eps);
  if (r.size() == 0) return std::nullopt;
  if (r.size() == m.frame_count()) return m;
  return m.slice(r.begin, r.end, m.id());
}

inline std::size_t clip_window(double clip_len_s, double fps) {
  const auto w = static_cast<long long>(std::llround(clip_len_s * fps));
  if (w < 1) throw InvalidArgument("clip window must span at least one frame");
  return static_cast<std::size_t>(w);
}

// Consecutive non-overlapping windows with the remainder as a final short
// window.
inline std::vector<FrameRange> segment_ranges(std::size_t frames, std::size_t window) {
  if (frames == 0) throw InvalidArgument("cannot segment an empty motion");
  std::vector<FrameRange> out;
  for (std::size_t b = 0; b < frames; b += window) out.push_back({b, std::min(frames, b + window)});
  return out;
}

inline std::string clip_name(const std::string& base, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03zu", index);
  return base + buf;
}

inline std::vector<MotionSequence> segment(const MotionSequence& m, double clip_len_s) {
  std::vector<MotionSequence> clips;
  const auto ranges = segment_ranges(m.frame_count(), clip_window(clip_len_s, m.fps()));
  for (std::size_t i = 0; i < ranges.size(); ++i) clips.push_back(m.slice(ranges[i].begin, ranges[i].end, clip_name(m.id(), i)));
  return clips;
}

// Boundary durations such as 60/20 must count as exactly min_len_s.
inline bool long_enough(const MotionSequence& clip, double min_len_s) { return clip.duration() >= min_len_s - 1e-9; }

struct ClipOutcome {
  MotionSequence clip;
  std::optional<std::string> drop_reason;  // empty = kept
  std::optional<MetricReport> report;

  bool kept() const { return !drop_reason.has_value(); }
};

inline std::vector<ClipOutcome> filter_length(const std::vector<MotionSequence>& clips, double min_len_s) {
  std::vector<ClipOutcome> out;
  for (const MotionSequence& c : clips) {
    ClipOutcome o{c, std::nullopt, std::nullopt};
    if (!long_enough(c, min_len_s)) o.drop_reason = reason::too_short;
    out.push_back(std::move(o));
  }
  return out;
}

// Jitter is checked before dynamics, so a clip failing both is "jitter".
inline std::optional<std::string> quality_verdict(const MetricReport& r, const FilterConfig& cfg) {
  if (r.jitter_degree && *r.jitter_degree > cfg.max_jitter) return reason::jitter;
  if (r.dynamic_degree && *r.dynamic_degree < cfg.min_dynamic) return reason::static_motion;
  return std::nullopt;
}

inline MetricReport summarize_clip(const MotionSequence& clip, const FilterConfig& cfg) {
  EvalOptions opt;
  opt.thresholds = cfg.thresholds;
  MetricSet sel = applicable_metrics(clip);
  if (clip.frame_count() < 3) sel.erase(Metric::jitter_degree);
  if (clip.frame_count() < 2) sel.erase(Metric::dynamic_degree);
  return evaluate_clip(clip, opt, standard_joint_limits(clip.skeleton()), sel);
}

// Attaches a MetricReport to every clip and drops on jitter / low dynamics.
inline std::vector<ClipOutcome> quality_filter(const std::vector<MotionSequence>& clips, const FilterConfig& cfg) {
  std::vector<ClipOutcome> out;
  for (const MotionSequence& c : clips) {
    ClipOutcome o{c, std::nullopt, summarize_clip(c, cfg)};
    o.drop_reason = quality_verdict(*o.report, cfg);
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace motionkit
