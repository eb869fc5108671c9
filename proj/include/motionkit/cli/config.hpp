#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "motionkit/curation/config.hpp"
#include "motionkit/flowmatch/branch.hpp"
#include "motionkit/flowmatch/kernel.hpp"

namespace motionkit::cli {

struct EvalSettings {
  std::optional<MetricSet> metrics;  // empty: every metric the clip supports
  double jitter_angular_weight = 0.0;
  BroadPhase broad_phase = BroadPhase::bvh;
};

struct FlowSettings {
  double tau = 0.5;
  int steps = 50;
  flow::Integrator integrator = flow::Integrator::euler;
  long frames = 100;
  long features = 6;
  double weight = 2.0;
  flow::DataKind data_kind = flow::DataKind::curated;
};

struct BenchSettings {
  double margin = 1.0;
  std::string correlation = "spearman";
  std::string embedder = "service";  // "service" (replay or live) or "hashing" (local)
  std::size_t embedder_dim = 256;
  std::string judge_url;     // live endpoints, used only with --live
  std::string embedder_url;
  // Metric name -> higher is better, for metric win ratios and radar.
  std::map<std::string, bool> polarity = {
      {"jitter_degree", false},    {"dynamic_degree", true},          {"foot_floating", false},
      {"ground_penetration", false}, {"foot_sliding", false},         {"body_penetration_pairs", false},
      {"body_penetration_frames", false}, {"pose_quality", false},    {"consistency_accuracy", true}};
};

// Everything a run depends on. Built once from defaults, an optional JSON
// config file and command-line overrides, then echoed into outputs.
struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;  // execution detail; excluded from the echo since outputs do not depend on it
  Thresholds thresholds;
  FilterConfig curation;
  EvalSettings eval;
  FlowSettings flow;
  BenchSettings bench;

  EvalOptions eval_options() const {
    EvalOptions o;
    o.thresholds = thresholds;
    o.jitter_angular_weight = eval.jitter_angular_weight;
    o.broad_phase = eval.broad_phase;
    return o;
  }
  FilterConfig filter_config() const {
    FilterConfig c = curation;
    c.thresholds = thresholds;
    return c;
  }
};

inline MetricSet parse_metric_list(const std::string& csv) {
  MetricSet out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    std::string item = csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    item = b == std::string::npos ? std::string{} : item.substr(b, e - b + 1);
    if (!item.empty()) out.insert(parse_metric(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw InvalidArgument("--metrics needs at least one metric name");
  return out;
}

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  for (const auto& [k, _] : j.items()) {
    if (!known.contains(k)) throw ParseError(where + ": unknown key '" + k + "'");
  }
}

}  // namespace detail

// Overlays a JSON config document onto cfg.
inline void apply_config_json(RunConfig& cfg, const json& j) {
  detail::reject_unknown(j, {"seed", "jobs", "thresholds", "curation", "eval", "flow", "bench"}, "config");
  try {
    cfg.seed = j.value("seed", cfg.seed);
    cfg.jobs = j.value("jobs", cfg.jobs);
    if (j.contains("thresholds")) cfg.thresholds = thresholds_from_json(j.at("thresholds"), cfg.thresholds);
    if (j.contains("curation")) {
      if (j.at("curation").contains("thresholds")) throw ParseError("config: thresholds belong at the top level");
      cfg.curation = filter_config_from_json(j.at("curation"), cfg.curation);
    }
    if (j.contains("eval")) {
      const json& e = j.at("eval");
      detail::reject_unknown(e, {"metrics", "jitter_angular_weight", "broad_phase"}, "config.eval");
      if (e.contains("metrics")) {
        MetricSet s;
        for (const auto& m : e.at("metrics")) s.insert(parse_metric(m.get<std::string>()));
        cfg.eval.metrics = s;
      }
      cfg.eval.jitter_angular_weight = e.value("jitter_angular_weight", cfg.eval.jitter_angular_weight);
      if (e.contains("broad_phase")) {
        const auto bp = e.at("broad_phase").get<std::string>();
        if (bp != "bvh" && bp != "all_pairs") throw ParseError("config.eval.broad_phase must be bvh or all_pairs");
        cfg.eval.broad_phase = bp == "bvh" ? BroadPhase::bvh : BroadPhase::all_pairs;
      }
    }
    if (j.contains("flow")) {
      const json& f = j.at("flow");
      detail::reject_unknown(f, {"tau", "steps", "integrator", "frames", "features", "weight", "data_kind"}, "config.flow");
      cfg.flow.tau = f.value("tau", cfg.flow.tau);
      cfg.flow.steps = f.value("steps", cfg.flow.steps);
      if (f.contains("integrator")) cfg.flow.integrator = flow::parse_integrator(f.at("integrator").get<std::string>());
      cfg.flow.frames = f.value("frames", cfg.flow.frames);
      cfg.flow.features = f.value("features", cfg.flow.features);
      cfg.flow.weight = f.value("weight", cfg.flow.weight);
      if (f.contains("data_kind")) cfg.flow.data_kind = flow::parse_data_kind(f.at("data_kind").get<std::string>());
    }
    if (j.contains("bench")) {
      const json& b = j.at("bench");
      detail::reject_unknown(b, {"margin", "correlation", "embedder", "embedder_dim", "judge_url", "embedder_url", "polarity"},
                             "config.bench");
      cfg.bench.margin = b.value("margin", cfg.bench.margin);
      cfg.bench.correlation = b.value("correlation", cfg.bench.correlation);
      cfg.bench.embedder = b.value("embedder", cfg.bench.embedder);
      cfg.bench.embedder_dim = b.value("embedder_dim", cfg.bench.embedder_dim);
      cfg.bench.judge_url = b.value("judge_url", cfg.bench.judge_url);
      cfg.bench.embedder_url = b.value("embedder_url", cfg.bench.embedder_url);
      if (b.contains("polarity")) {
        for (const auto& [k, v] : b.at("polarity").items()) {
          if (v != "higher" && v != "lower") throw ParseError("config.bench.polarity values must be higher or lower");
          cfg.bench.polarity[k] = v == "higher";
        }
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

inline void validate(const RunConfig& c) {
  c.filter_config().validate();
  if (c.jobs < 1) throw InvalidArgument("jobs must be >= 1");
  if (!(c.flow.tau >= 0.0 && c.flow.tau <= 1.0)) throw InvalidArgument("flow.tau must lie in [0, 1]");
  if (c.flow.steps < 1) throw InvalidArgument("flow.steps must be >= 1");
  if (c.flow.frames < 1 || c.flow.features < 1) throw InvalidArgument("flow tensor shape must be positive");
  if (!(c.bench.margin > 0.0)) throw InvalidArgument("bench.margin must be > 0");
  if (c.bench.embedder != "service" && c.bench.embedder != "hashing") {
    throw InvalidArgument("bench.embedder must be service or hashing");
  }
  if (c.bench.embedder_dim < 1) throw InvalidArgument("bench.embedder_dim must be >= 1");
  if (c.bench.correlation != "pearson" && c.bench.correlation != "spearman") {
    throw InvalidArgument("bench.correlation must be pearson or spearman");
  }
}

inline ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["thresholds"] = thresholds_to_json(c.thresholds);
  ordered_json cur = filter_config_to_json(c.curation);
  cur.erase("thresholds");
  j["curation"] = cur;
  ordered_json e;
  if (c.eval.metrics) {
    std::vector<std::string> names;
    for (Metric m : *c.eval.metrics) names.emplace_back(metric_name(m));
    e["metrics"] = names;
  } else {
    e["metrics"] = "applicable";
  }
  e["jitter_angular_weight"] = c.eval.jitter_angular_weight;
  e["broad_phase"] = c.eval.broad_phase == BroadPhase::bvh ? "bvh" : "all_pairs";
  j["eval"] = e;
  ordered_json f;
  f["tau"] = c.flow.tau;
  f["steps"] = c.flow.steps;
  f["integrator"] = flow::integrator_name(c.flow.integrator);
  f["frames"] = c.flow.frames;
  f["features"] = c.flow.features;
  f["weight"] = c.flow.weight;
  f["data_kind"] = c.flow.data_kind == flow::DataKind::curated ? "curated" : "other";
  j["flow"] = f;
  ordered_json b;
  b["margin"] = c.bench.margin;
  b["correlation"] = c.bench.correlation;
  b["embedder"] = c.bench.embedder;
  b["embedder_dim"] = c.bench.embedder_dim;
  b["judge_url"] = c.bench.judge_url;
  b["embedder_url"] = c.bench.embedder_url;
  ordered_json pol = ordered_json::object();
  for (const auto& [k, v] : c.bench.polarity) pol[k] = v ? "higher" : "lower";
  b["polarity"] = pol;
  j["bench"] = b;
  return j;
}

// Command-line values that override the config file.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> metrics;
};

inline RunConfig resolve_config(const Overrides& o) {
  RunConfig cfg;
  if (o.config_path) apply_config_json(cfg, read_json_file(*o.config_path));
  if (o.seed) cfg.seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.metrics) cfg.eval.metrics = parse_metric_list(*o.metrics);
  validate(cfg);
  return cfg;
}

}  // namespace motionkit::cli
