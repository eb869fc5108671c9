#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "motionkit/metrics/penetration.hpp"
#include "motionkit/metrics/pose_scorer.hpp"
#include "motionkit/metrics/temporal.hpp"
#include "motionkit/util/json_util.hpp"

namespace motionkit {

enum class Metric {
  jitter_degree,
  dynamic_degree,
  foot_floating,
  ground_penetration,
  foot_sliding,
  body_penetration,
  pose_quality,
};

inline constexpr std::array<Metric, 7> kAllMetrics = {
    Metric::jitter_degree, Metric::dynamic_degree, Metric::foot_floating, Metric::ground_penetration,
    Metric::foot_sliding,  Metric::body_penetration, Metric::pose_quality};

using MetricSet = std::set<Metric>;

inline MetricSet all_metrics() { return {kAllMetrics.begin(), kAllMetrics.end()}; }

inline std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::jitter_degree: return "jitter_degree";
    case Metric::dynamic_degree: return "dynamic_degree";
    case Metric::foot_floating: return "foot_floating";
    case Metric::ground_penetration: return "ground_penetration";
    case Metric::foot_sliding: return "foot_sliding";
    case Metric::body_penetration: return "body_penetration";
    case Metric::pose_quality: return "pose_quality";
  }
  return "unknown";
}

// Accepts full names and the short forms jitter / dynamic.
inline Metric parse_metric(std::string_view name) {
  if (name == "jitter") return Metric::jitter_degree;
  if (name == "dynamic") return Metric::dynamic_degree;
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

// Metrics computable from the channels the motion carries: pose scoring
// needs rotations, body penetration needs capsule radii.
inline MetricSet applicable_metrics(const MotionSequence& motion) {
  MetricSet s = all_metrics();
  if (!motion.has_rotations()) s.erase(Metric::pose_quality);
  if (motion.skeleton().capsule_radii().empty() || motion.skeleton().joint_count() < 2) s.erase(Metric::body_penetration);
  if (motion.skeleton().foot_joints().empty()) {
    s.erase(Metric::foot_floating);
    s.erase(Metric::ground_penetration);
    s.erase(Metric::foot_sliding);
  }
  return s;
}

struct EvalOptions {
  Thresholds thresholds;
  // Weight of the angular-acceleration term in jitter_degree.
  double jitter_angular_weight = 0.0;
  BroadPhase broad_phase = BroadPhase::bvh;
};

// Per-clip quality values. A field is empty only if its metric was not requested.
struct MetricReport {
  std::string clip_id;
  std::optional<double> jitter_degree;
  std::optional<double> dynamic_degree;
  std::optional<double> foot_floating;
  std::optional<double> ground_penetration;
  std::optional<double> foot_sliding;
  std::optional<double> body_penetration_pairs;
  std::optional<double> body_penetration_frames;
  std::optional<double> pose_quality;
  Thresholds thresholds_used;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Evaluates the requested metrics. Any sub-metric failure is rethrown as a
// MetricError naming that metric.
inline MetricReport evaluate_clip(const MotionSequence& motion, const EvalOptions& options,
                                  const PoseScorer& scorer, const MetricSet& selection = all_metrics()) {
  options.thresholds.validate();
  MetricReport r;
  r.clip_id = motion.id();
  r.thresholds_used = options.thresholds;
  const Thresholds& th = options.thresholds;
  auto run = [&](Metric m, auto&& fn) {
    if (!selection.contains(m)) return;
    try {
      fn();
    } catch (const Error& e) {
      throw MetricError(std::string(metric_name(m)), e.what());
    }
  };
  run(Metric::jitter_degree, [&] { r.jitter_degree = jitter_degree(motion, options.jitter_angular_weight); });
  run(Metric::dynamic_degree, [&] { r.dynamic_degree = dynamic_degree(motion); });
  run(Metric::foot_floating, [&] { r.foot_floating = foot_floating(motion, th); });
  run(Metric::ground_penetration, [&] { r.ground_penetration = ground_penetration(motion, th); });
  run(Metric::foot_sliding, [&] { r.foot_sliding = foot_sliding(motion, th); });
  run(Metric::body_penetration, [&] {
    const BodyPenetration bp = body_penetration(motion, options.broad_phase);
    r.body_penetration_pairs = bp.mean_pairs_per_frame;
    r.body_penetration_frames = bp.frame_fraction;
  });
  run(Metric::pose_quality, [&] { r.pose_quality = pose_quality(motion, scorer); });
  return r;
}

inline ordered_json thresholds_to_json(const Thresholds& t) {
  ordered_json j;
  j["contact_height"] = t.contact_height;
  j["float_height"] = t.float_height;
  j["penetration_eps"] = t.penetration_eps;
  j["slide_min_contact_frames"] = t.slide_min_contact_frames;
  return j;
}

inline Thresholds thresholds_from_json(const json& j, Thresholds t = {}) {
  if (!j.is_object()) throw ParseError("thresholds must be an object");
  t.contact_height = j.value("contact_height", t.contact_height);
  t.float_height = j.value("float_height", t.float_height);
  t.penetration_eps = j.value("penetration_eps", t.penetration_eps);
  t.slide_min_contact_frames = j.value("slide_min_contact_frames", t.slide_min_contact_frames);
  t.validate();
  return t;
}

// Flat object keyed by field name. With include_thresholds false the
// output carries clip_id plus the computed metrics only.
inline ordered_json report_to_json(const MetricReport& r, bool include_thresholds = true) {
  ordered_json j;
  j["clip_id"] = r.clip_id;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("jitter_degree", r.jitter_degree);
  put("dynamic_degree", r.dynamic_degree);
  put("foot_floating", r.foot_floating);
  put("ground_penetration", r.ground_penetration);
  put("foot_sliding", r.foot_sliding);
  put("body_penetration_pairs", r.body_penetration_pairs);
  put("body_penetration_frames", r.body_penetration_frames);
  put("pose_quality", r.pose_quality);
  if (include_thresholds) j["thresholds_used"] = thresholds_to_json(r.thresholds_used);
  return j;
}

inline MetricReport report_from_json(const json& j) {
  MetricReport r;
  r.clip_id = j.at("clip_id").get<std::string>();
  auto get = [&](const char* key, std::optional<double>& v) {
    if (j.contains(key)) v = j.at(key).get<double>();
  };
  get("jitter_degree", r.jitter_degree);
  get("dynamic_degree", r.dynamic_degree);
  get("foot_floating", r.foot_floating);
  get("ground_penetration", r.ground_penetration);
  get("foot_sliding", r.foot_sliding);
  get("body_penetration_pairs", r.body_penetration_pairs);
  get("body_penetration_frames", r.body_penetration_frames);
  get("pose_quality", r.pose_quality);
  if (j.contains("thresholds_used")) r.thresholds_used = thresholds_from_json(j.at("thresholds_used"));
  return r;
}

}  // namespace motionkit
