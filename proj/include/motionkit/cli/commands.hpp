#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

// Eigen must precede httplib: <resolv.h> defines a _res macro.
#include "motionkit/flowmatch/distill.hpp"
#include "motionkit/benchmark/consistency.hpp"
#include "motionkit/benchmark/correlation.hpp"
#include "motionkit/benchmark/http_service.hpp"
#include "motionkit/benchmark/human_csv.hpp"
#include "motionkit/benchmark/radar.hpp"
#include "motionkit/cli/config.hpp"
#include "motionkit/curation/pipeline.hpp"

namespace motionkit::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;      // unreadable / malformed input, failed evaluation
inline constexpr int kExitEmpty = 2;      // nothing to do, or nothing survived
inline constexpr int kExitUnscored = 3;   // benchmark run with too many unscored renders

namespace fs = std::filesystem;

inline ordered_json provenance(const std::string& command, const ordered_json& inputs, const RunConfig& cfg) {
  ordered_json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["config"] = config_to_json(cfg);
  return j;
}

inline void write_json(const fs::path& path, const ordered_json& j) { write_text_file(path.string(), j.dump(2) + "\n"); }

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitError;
  }
}

// ---- eval ----------------------------------------------------------------

struct EvalInputs {
  std::string manifest;
  std::string out;
};

// Clip paths named by an eval manifest, resolved against its directory.
// Accepts curation output (clip manifest rows: dropped rows are skipped,
// kept rows use clip_path) and source manifests (rows with path).
inline std::vector<std::string> eval_clip_paths(const std::string& manifest) {
  const fs::path base = fs::path(manifest).parent_path();
  std::vector<std::string> out;
  std::size_t line = 0;
  for (const json& row : read_jsonl_file(manifest)) {
    ++line;
    if (!row.is_object()) throw ParseError(manifest + ": row " + std::to_string(line) + " is not an object");
    std::string rel;
    if (row.contains("status")) {
      if (row.at("status") != "kept") continue;
      if (!row.contains("clip_path") || !row.at("clip_path").is_string()) {
        throw ParseError(manifest + ": kept row " + std::to_string(line) + " has no clip_path");
      }
      rel = row.at("clip_path").get<std::string>();
    } else if (row.contains("path") && row.at("path").is_string()) {
      rel = row.at("path").get<std::string>();
    } else if (row.contains("clip_path") && row.at("clip_path").is_string()) {
      rel = row.at("clip_path").get<std::string>();
    } else {
      throw ParseError(manifest + ": row " + std::to_string(line) + " names no clip");
    }
    const fs::path p(rel);
    out.push_back((p.is_absolute() ? p : base / p).string());
  }
  return out;
}

// Writes metrics.jsonl (one report per clip, manifest order) and
// eval_summary.json under out.
inline int cmd_eval(const EvalInputs& in, const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const auto paths = eval_clip_paths(in.manifest);
    if (paths.empty()) {
      log << "eval: manifest names no clips\n";
      return kExitEmpty;
    }
    const EvalOptions opt = cfg.eval_options();
    struct Row {
      ordered_json line;
      std::optional<MetricReport> report;
    };
    const auto rows = parallel_map(paths.size(), cfg.jobs, [&](std::size_t i) {
      Row r;
      std::string id = fs::path(paths[i]).stem().string();
      try {
        const MotionSequence m = read_motion(paths[i]);
        id = m.id();
        const MetricSet sel = cfg.eval.metrics ? *cfg.eval.metrics : applicable_metrics(m);
        r.report = evaluate_clip(m, opt, standard_joint_limits(m.skeleton()), sel);
        r.line = report_to_json(*r.report, false);
      } catch (const std::exception& e) {
        r.line["clip_id"] = id;
        r.line["error"] = e.what();
      }
      return r;
    });

    std::vector<ordered_json> lines;
    std::map<std::string, std::pair<double, std::size_t>> sums;
    std::size_t failed = 0;
    for (const Row& r : rows) {
      lines.push_back(r.line);
      if (!r.report) {
        ++failed;
        log << "eval: " << r.line["clip_id"].get<std::string>() << ": " << r.line["error"].get<std::string>() << "\n";
        continue;
      }
      for (const auto& [k, v] : r.line.items()) {
        if (k == "clip_id") continue;
        sums[k].first += v.get<double>();
        ++sums[k].second;
      }
    }
    fs::create_directories(in.out);
    write_text_file((fs::path(in.out) / "metrics.jsonl").string(), to_jsonl(lines));

    ordered_json inputs;
    inputs["manifest"] = in.manifest;
    ordered_json summary = provenance("eval", inputs, cfg);
    summary["clips"] = paths.size();
    summary["evaluated"] = paths.size() - failed;
    summary["failed"] = failed;
    ordered_json means = ordered_json::object();
    for (const auto& [k, s] : sums) means[k] = s.first / static_cast<double>(s.second);
    summary["means"] = means;
    write_json(fs::path(in.out) / "eval_summary.json", summary);
    return failed ? kExitError : kExitOk;
  });
}

// ---- curate --------------------------------------------------------------

struct CurateInputs {
  std::string manifest;
  std::string out;
};

inline int cmd_curate(const CurateInputs& in, const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const auto sources = read_source_manifest(in.manifest);
    const CurationResult result = run_pipeline(sources, cfg.filter_config(), cfg.jobs);
    ordered_json inputs;
    inputs["manifest"] = in.manifest;
    write_curation(in.out, result, provenance("curate", inputs, cfg));
    const CurationSummary s = summarize(result.entries());
    log << "curate: " << s.kept << " kept, " << s.dropped() << " dropped\n";
    return s.kept > 0 ? kExitOk : kExitEmpty;
  });
}

// ---- flow ----------------------------------------------------------------

struct FlowInputs {
  std::string prompts;  // {"prompts": [{"id", "text", "reference_motion"?, "alignment_score"?}]}
  std::string out;
};

// Distills a (prompt, motion) dataset from the analytic teacher. Each row
// also records the branch drawn for training (T2M whenever there is no
// reference motion to attend to) and, when the prompt carries a text/video
// alignment score, the branch gating would pick at inference.
inline int cmd_flow(const FlowInputs& in, const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const json doc = read_json_file(in.prompts);
    std::vector<flow::Condition> prompts;
    std::vector<std::optional<double>> scores;
    try {
      for (const json& p : doc.at("prompts")) {
        prompts.push_back(flow::condition_from_json(p));
        scores.push_back(p.contains("alignment_score") ? std::optional(p.at("alignment_score").get<double>())
                                                       : std::nullopt);
      }
    } catch (const json::exception& e) {
      throw ParseError(in.prompts + ": " + e.what());
    }
    if (prompts.empty()) {
      log << "flow: no prompts\n";
      return kExitEmpty;
    }
    flow::DistillOptions opt;
    opt.frames = cfg.flow.frames;
    opt.features = cfg.flow.features;
    opt.seed = cfg.seed;
    opt.jobs = cfg.jobs;
    opt.weight = cfg.flow.weight;
    const flow::TowardTargetField field;
    const auto samples = flow::distill_dataset(flow::ode_teacher(field, cfg.flow.steps, cfg.flow.integrator), prompts, opt);
    auto rows = flow::write_distilled(in.out, samples, opt);

    std::map<std::string, std::size_t> training, inference;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto drawn = flow::draw_training_branch(cfg.flow.data_kind, cfg.seed, i);
      const auto tb = flow::branch_name(prompts[i].reference_motion ? drawn : flow::Branch::t2m);
      rows[i]["training_branch"] = tb;
      ++training[tb];
      if (scores[i]) {
        const auto ib = flow::branch_name(flow::select_branch(*scores[i], cfg.flow.tau));
        rows[i]["inference_branch"] = ib;
        ++inference[ib];
      }
      failed += !samples[i].ok();
    }
    write_text_file((fs::path(in.out) / "dataset.jsonl").string(), to_jsonl(rows));

    ordered_json inputs;
    inputs["prompts"] = in.prompts;
    ordered_json summary = provenance("flow", inputs, cfg);
    summary["samples"] = rows.size();
    summary["failed"] = failed;
    summary["training_branches"] = training;
    summary["inference_branches"] = inference;
    write_json(fs::path(in.out) / "flow_summary.json", summary);
    return failed ? kExitError : kExitOk;
  });
}

// ---- radar ---------------------------------------------------------------

struct RadarInputs {
  std::string input;  // {"metrics": {name: {"higher_is_better": bool, "values": {model: value}}}}
  std::string out;
};

inline int cmd_radar(const RadarInputs& in, const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const json doc = read_json_file(in.input);
    ordered_json radar = ordered_json::object();
    try {
      for (const auto& [name, m] : doc.at("metrics").items()) {
        const auto values = m.at("values").get<std::map<std::string, double>>();
        radar[name] = bench::radar_normalize(values, m.at("higher_is_better").get<bool>());
      }
    } catch (const json::exception& e) {
      throw ParseError(in.input + ": " + e.what());
    }
    if (radar.empty()) {
      log << "radar: no metrics\n";
      return kExitEmpty;
    }
    ordered_json inputs;
    inputs["input"] = in.input;
    ordered_json out = provenance("radar", inputs, cfg);
    out["radar"] = radar;
    fs::create_directories(in.out);
    write_json(fs::path(in.out) / "radar.json", out);
    return kExitOk;
  });
}

// ---- winratio ------------------------------------------------------------

struct WinRatioInputs {
  std::string pairwise;
  std::optional<std::string> singles;
  std::string out;
};

struct HumanPreference {
  bench::WinRatioTable table;
  std::vector<bench::Revision> revisions;
};

inline HumanPreference human_preference(const std::string& pairwise, const std::optional<std::string>& singles,
                                        double margin) {
  auto cmp = bench::parse_pairwise_csv(read_text_file(pairwise), pairwise);
  HumanPreference h;
  if (singles) {
    auto rec = bench::reconcile_single_scores(cmp, bench::parse_singles_csv(read_text_file(*singles), *singles), margin);
    cmp = std::move(rec.comparisons);
    h.revisions = std::move(rec.log);
  }
  h.table = bench::win_ratio(cmp);
  return h;
}

inline ordered_json revisions_json(const std::vector<bench::Revision>& log) {
  ordered_json j = ordered_json::array();
  for (const auto& r : log) j.push_back(bench::revision_to_json(r));
  return j;
}

inline int cmd_winratio(const WinRatioInputs& in, const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const HumanPreference h = human_preference(in.pairwise, in.singles, cfg.bench.margin);
    ordered_json inputs;
    inputs["pairwise"] = in.pairwise;
    inputs["singles"] = in.singles ? ordered_json(*in.singles) : ordered_json(nullptr);
    ordered_json out = provenance("winratio", inputs, cfg);
    out["win_ratio"] = bench::win_ratio_to_json(h.table);
    out["revisions"] = revisions_json(h.revisions);
    fs::create_directories(in.out);
    write_json(fs::path(in.out) / "winratio.json", out);
    return kExitOk;
  });
}

// ---- bench ---------------------------------------------------------------

struct BenchInputs {
  std::optional<std::string> suite;
  std::optional<std::string> renders;      // JSONL {"prompt_id", "model", "render_ref"}
  std::optional<std::string> transcripts;  // recorded exchanges for replay
  bool live = false;                       // call judge_url / embedder_url instead of replaying
  std::optional<std::string> human_pairwise;
  std::optional<std::string> human_singles;
  std::optional<std::string> metric_scores;  // JSONL {"prompt_id", "model", metric: value, ...}
  std::string out;
};

namespace detail {

inline ordered_json opt_path(const std::optional<std::string>& p) { return p ? ordered_json(*p) : ordered_json(nullptr); }

// (prompt, model) -> value for every metric column in the scores file.
inline std::map<std::string, std::map<std::pair<std::string, std::string>, double>> read_metric_scores(
    const std::string& path) {
  std::map<std::string, std::map<std::pair<std::string, std::string>, double>> out;
  for (const json& row : read_jsonl_file(path)) {
    try {
      const auto key = std::pair(row.at("prompt_id").get<std::string>(), row.at("model").get<std::string>());
      for (const auto& [k, v] : row.items()) {
        if (k == "prompt_id" || k == "model") continue;
        if (!v.is_number()) throw ParseError(path + ": metric '" + k + "' is not a number");
        out[k][key] = v.get<double>();
      }
    } catch (const json::exception& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  return out;
}

inline std::map<std::string, double> per_model_mean(const std::map<std::pair<std::string, std::string>, double>& v) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& [key, x] : v) {
    acc[key.second].first += x;
    ++acc[key.second].second;
  }
  std::map<std::string, double> out;
  for (const auto& [m, s] : acc) out[m] = s.first / static_cast<double>(s.second);
  return out;
}

}  // namespace detail

// Runs whichever stages its inputs allow: judged consistency accuracy
// (suite + renders), human win ratios (pairwise CSV, optionally reconciled
// against singles), metric win ratios and their correlation with the human
// ones (metric scores), and a radar table over everything per model.
inline int cmd_bench(const BenchInputs& in, const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const fs::path out_dir(in.out);
    ordered_json inputs;
    inputs["suite"] = detail::opt_path(in.suite);
    inputs["renders"] = detail::opt_path(in.renders);
    inputs["transcripts"] = detail::opt_path(in.transcripts);
    inputs["live"] = in.live;
    inputs["human_pairwise"] = detail::opt_path(in.human_pairwise);
    inputs["human_singles"] = detail::opt_path(in.human_singles);
    inputs["metric_scores"] = detail::opt_path(in.metric_scores);
    ordered_json report = provenance("bench", inputs, cfg);
    bool did_something = false;
    int code = kExitOk;
    std::map<std::string, std::map<std::string, double>> radar_inputs;  // metric -> model -> raw value

    if (in.suite || in.renders) {
      if (!in.suite || !in.renders) throw InvalidArgument("consistency evaluation needs both --suite and --renders");
      const bench::PromptSuite suite = bench::read_suite(*in.suite);
      const auto renders = bench::renders_from_jsonl(read_jsonl_file(*in.renders));
      std::unique_ptr<bench::JsonService> backend;
      if (in.live) {
        std::map<std::string, std::string> urls;
        if (!cfg.bench.judge_url.empty()) urls["judge"] = cfg.bench.judge_url;
        if (!cfg.bench.embedder_url.empty()) urls["embedder"] = cfg.bench.embedder_url;
        if (!urls.contains("judge")) throw InvalidArgument("--live needs bench.judge_url in the config");
        backend = std::make_unique<bench::HttpService>(urls);
      } else {
        if (!in.transcripts) throw InvalidArgument("replay needs --transcripts (or pass --live)");
        backend = std::make_unique<bench::ReplayService>(bench::ReplayService::from_file(*in.transcripts));
      }
      const bench::RecordingService recorder(*backend);
      const bench::ServiceJudge judge(recorder);
      const bench::ServiceEmbedder service_embedder(recorder);
      const bench::HashingEmbedder hashing(cfg.bench.embedder_dim);
      const bench::EmbeddingProvider& embedder =
          cfg.bench.embedder == "hashing" ? static_cast<const bench::EmbeddingProvider&>(hashing) : service_embedder;
      const auto rep = bench::run_consistency_eval(suite, renders, judge, embedder, cfg.seed, cfg.jobs);

      fs::create_directories(out_dir);
      std::vector<ordered_json> judged;
      for (const auto& r : rep.results) judged.push_back(bench::judged_render_to_json(r));
      write_text_file((out_dir / "judgments.jsonl").string(), to_jsonl(judged));
      write_text_file((out_dir / "transcript.jsonl").string(), recorder.transcript_jsonl());

      ordered_json c;
      c["renders"] = rep.results.size();
      c["unscored"] = rep.unscored();
      c["unscored_fraction"] = rep.unscored_fraction();
      c["acceptable"] = rep.acceptable();
      ordered_json pm = ordered_json::object(), pmd = ordered_json::object();
      for (const auto& [m, a] : rep.per_model) {
        pm[m] = bench::accuracy_to_json(a);
        radar_inputs["consistency_accuracy"][m] = a.accuracy();
      }
      for (const auto& [m, dims] : rep.per_model_dimension) {
        for (const auto& [d, a] : dims) pmd[m][d] = bench::accuracy_to_json(a);
      }
      c["per_model"] = pm;
      c["per_model_dimension"] = pmd;
      report["consistency"] = c;
      did_something = true;
      if (!rep.acceptable()) {
        log << "bench: " << rep.unscored() << " of " << rep.results.size() << " renders unscored\n";
        code = kExitUnscored;
      }
    }

    std::optional<HumanPreference> human;
    if (in.human_pairwise) {
      human = human_preference(*in.human_pairwise, in.human_singles, cfg.bench.margin);
      ordered_json h;
      h["win_ratio"] = bench::win_ratio_to_json(human->table);
      h["revisions"] = revisions_json(human->revisions);
      report["human"] = h;
      did_something = true;
    } else if (in.human_singles) {
      throw InvalidArgument("--human-singles needs --human-pairwise");
    }

    if (in.metric_scores) {
      const auto method = bench::parse_correlation_method(cfg.bench.correlation);
      ordered_json metrics = ordered_json::object();
      for (const auto& [name, values] : detail::read_metric_scores(*in.metric_scores)) {
        const auto pol = cfg.bench.polarity.find(name);
        if (pol == cfg.bench.polarity.end()) throw InvalidArgument("no polarity configured for metric '" + name + "'");
        ordered_json mj;
        const auto table = bench::win_ratio(bench::metric_comparisons(values, pol->second));
        mj["win_ratio"] = bench::win_ratio_to_json(table);
        if (human) {
          try {
            mj["human_correlation"] = bench::correlate(table.ratios(), human->table.ratios(), method);
          } catch (const Error& e) {
            mj["human_correlation"] = nullptr;
            mj["correlation_error"] = e.what();
          }
        }
        metrics[name] = mj;
        radar_inputs[name] = detail::per_model_mean(values);
      }
      report["metrics"] = metrics;
      did_something = true;
    }

    if (!did_something) {
      log << "bench: nothing to do (give --suite/--renders, --human-pairwise or --metric-scores)\n";
      return kExitEmpty;
    }

    ordered_json radar = ordered_json::object(), radar_errors = ordered_json::object();
    for (const auto& [name, per_model] : radar_inputs) {
      const auto pol = cfg.bench.polarity.find(name);
      try {
        radar[name] = bench::radar_normalize(per_model, pol == cfg.bench.polarity.end() || pol->second);
      } catch (const Error& e) {
        radar_errors[name] = e.what();
      }
    }
    report["radar"] = radar;
    if (!radar_errors.empty()) report["radar_errors"] = radar_errors;
    fs::create_directories(out_dir);
    write_json(out_dir / "bench_report.json", report);
    return code;
  });
}

}  // namespace motionkit::cli
