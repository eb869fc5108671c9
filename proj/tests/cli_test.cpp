#include <gtest/gtest.h>

#include <sstream>

#include "demo_data.hpp"
#include "motionkit/cli/commands.hpp"
#include "test_util.hpp"

using namespace motionkit;
using namespace motionkit::cli;

namespace {

RunConfig config_with(std::size_t jobs, std::uint64_t seed = 0) {
  RunConfig c;
  c.jobs = jobs;
  c.seed = seed;
  return c;
}

// Three clips listed out of alphabetical order.
std::string three_clip_manifest(const TempDir& dir) {
  std::filesystem::create_directories(dir.path() / "clips");
  write_motion(dir / "clips/zeta.json", demo::walk_clip(60, 20.0, "zeta"));
  write_motion(dir / "clips/alpha.json", demo::static_clip(40, "alpha"));
  write_motion(dir / "clips/mid.json", demo::walk_clip(80, 20.0, "mid", 1.0));
  spit(dir.path() / "clips.jsonl", "{\"path\":\"clips/zeta.json\"}\n{\"path\":\"clips/alpha.json\"}\n"
                                   "{\"path\":\"clips/mid.json\"}\n");
  return dir / "clips.jsonl";
}

}  // namespace

TEST(Config, DefaultsFlagsAndUnknownKeys) {
  TempDir dir("cfg");
  spit(dir.path() / "c.json", R"({"seed": 4, "jobs": 2, "thresholds": {"contact_height": 0.04},
                                  "curation": {"min_len_s": 2.0}, "flow": {"tau": 0.7, "integrator": "heun"}})");
  Overrides o;
  o.config_path = dir / "c.json";
  RunConfig c = resolve_config(o);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.jobs, 2u);
  EXPECT_DOUBLE_EQ(c.filter_config().thresholds.contact_height, 0.04);
  EXPECT_DOUBLE_EQ(c.eval_options().thresholds.contact_height, 0.04);
  EXPECT_DOUBLE_EQ(c.curation.min_len_s, 2.0);
  EXPECT_DOUBLE_EQ(c.flow.tau, 0.7);

  o.seed = 9;
  o.jobs = 8;
  o.metrics = "jitter, foot_sliding";
  c = resolve_config(o);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.jobs, 8u);
  EXPECT_EQ(*c.eval.metrics, (MetricSet{Metric::jitter_degree, Metric::foot_sliding}));

  spit(dir.path() / "bad.json", R"({"flow": {"tua": 0.5}})");
  o.config_path = dir / "bad.json";
  EXPECT_THROW(resolve_config(o), ParseError);
  spit(dir.path() / "bad2.json", R"({"curation": {"min_len_s": 9.0}})");
  o.config_path = dir / "bad2.json";
  EXPECT_THROW(resolve_config(o), ParseError);
  o.config_path.reset();
  o.metrics = "jitter,wobble";
  EXPECT_THROW(resolve_config(o), InvalidArgument);
}

TEST(Config, EchoRoundTripsAndOmitsJobs) {
  RunConfig c;
  c.seed = 11;
  c.flow.steps = 7;
  c.eval.metrics = MetricSet{Metric::dynamic_degree};
  c.bench.polarity["my_metric"] = true;
  const ordered_json echo = config_to_json(c);
  EXPECT_FALSE(echo.contains("jobs"));
  RunConfig back;
  apply_config_json(back, json::parse(echo.dump()));
  EXPECT_EQ(config_to_json(back), echo);
}

TEST(CliEval, ReportsFollowManifestOrder) {
  TempDir dir("eval");
  const std::string manifest = three_clip_manifest(dir);
  std::ostringstream log;
  ASSERT_EQ(cmd_eval({manifest, dir / "out"}, config_with(1), log), kExitOk) << log.str();
  const auto rows = read_jsonl_file(dir / "out/metrics.jsonl");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["clip_id"], "zeta");
  EXPECT_EQ(rows[1]["clip_id"], "alpha");
  EXPECT_EQ(rows[2]["clip_id"], "mid");
  EXPECT_TRUE(rows[0].contains("pose_quality"));
  EXPECT_FALSE(rows[0].contains("thresholds_used"));
  const json summary = read_json_file(dir / "out/eval_summary.json");
  EXPECT_EQ(summary["clips"], 3);
  EXPECT_EQ(summary["config"], json::parse(config_to_json(config_with(1)).dump()));
  EXPECT_TRUE(slurp(dir.path() / "out/metrics.jsonl").ends_with("\n"));
}

TEST(CliEval, MetricSelectionRestrictsFields) {
  TempDir dir("evalsel");
  const std::string manifest = three_clip_manifest(dir);
  RunConfig c = config_with(2);
  c.eval.metrics = parse_metric_list("jitter,foot_sliding");
  std::ostringstream log;
  ASSERT_EQ(cmd_eval({manifest, dir / "out"}, c, log), kExitOk);
  for (const json& r : read_jsonl_file(dir / "out/metrics.jsonl")) {
    std::set<std::string> keys;
    for (const auto& [k, _] : r.items()) keys.insert(k);
    EXPECT_EQ(keys, (std::set<std::string>{"clip_id", "jitter_degree", "foot_sliding"}));
  }
}

TEST(CliEval, ExitCodes) {
  TempDir dir("evalcodes");
  std::ostringstream log;
  spit(dir.path() / "empty.jsonl", "\n");
  EXPECT_EQ(cmd_eval({dir / "empty.jsonl", dir / "o1"}, config_with(1), log), kExitEmpty);
  EXPECT_EQ(cmd_eval({dir / "missing.jsonl", dir / "o2"}, config_with(1), log), kExitError);
  spit(dir.path() / "dangling.jsonl", "{\"path\":\"nope.json\"}\n");
  EXPECT_EQ(cmd_eval({dir / "dangling.jsonl", dir / "o3"}, config_with(1), log), kExitError);
  EXPECT_TRUE(read_jsonl_file(dir / "o3/metrics.jsonl")[0].contains("error"));
  // Explicitly requesting a metric the clip cannot support is an evaluation failure.
  const auto fk = synthetic::with_fk_positions(demo::walk_clip(30));
  std::vector<Frame> frames = fk.frames();
  for (Frame& f : frames) f.joint_rotations.reset();
  write_motion(dir / "pos.json", fk.with_frames(frames));
  spit(dir.path() / "pos.jsonl", "{\"path\":\"pos.json\"}\n");
  RunConfig c = config_with(1);
  c.eval.metrics = MetricSet{Metric::pose_quality};
  EXPECT_EQ(cmd_eval({dir / "pos.jsonl", dir / "o4"}, c, log), kExitError);
  EXPECT_EQ(cmd_eval({dir / "pos.jsonl", dir / "o5"}, config_with(1), log), kExitOk);
}

TEST(CliCurate, DemoSourcesThenEvalOfKeptClips) {
  TempDir dir("curate");
  demo::write_demo(dir.path());
  const auto before = tree_contents(dir.path());
  std::ostringstream log;
  ASSERT_EQ(cmd_curate({dir / "sources.jsonl", dir / "out"}, config_with(2), log), kExitOk) << log.str();
  const json summary = read_json_file(dir / "out/summary.json");
  EXPECT_EQ(summary["command"], "curate");
  EXPECT_EQ(summary["kept"], 5);
  EXPECT_EQ(summary["dropped_by_reason"]["jitter"], 1);
  EXPECT_EQ(summary["dropped_by_reason"]["static"], 1);
  EXPECT_EQ(summary["dropped_by_reason"]["too_short"], 3);

  ASSERT_EQ(cmd_eval({dir / "out/manifest.jsonl", dir / "eval"}, config_with(2), log), kExitOk) << log.str();
  EXPECT_EQ(read_jsonl_file(dir / "eval/metrics.jsonl").size(), 5u);

  // Inputs untouched; everything new lives under the output directories.
  auto after = tree_contents(dir.path());
  std::erase_if(after, [](const auto& kv) { return kv.first.starts_with("out/") || kv.first.starts_with("eval/"); });
  EXPECT_EQ(after, before);
}

TEST(CliCurate, NothingKeptExitsTwo) {
  TempDir dir("curate-none");
  write_motion(dir / "s.json", demo::static_clip(100));
  spit(dir.path() / "sources.jsonl", "{\"path\":\"s.json\",\"source_kind\":\"mocap\"}\n");
  std::ostringstream log;
  EXPECT_EQ(cmd_curate({dir / "sources.jsonl", dir / "out"}, config_with(1), log), kExitEmpty);
  EXPECT_EQ(cmd_curate({dir / "absent.jsonl", dir / "out2"}, config_with(1), log), kExitError);
}

TEST(CliDeterminism, CurateAndEvalIgnoreJobCount) {
  TempDir dir("det");
  demo::write_demo(dir.path());
  std::ostringstream log;
  std::vector<std::map<std::string, std::string>> trees;
  for (std::size_t jobs : {1u, 8u, 1u}) {
    const std::string out = dir / ("run" + std::to_string(trees.size()));
    ASSERT_EQ(cmd_curate({dir / "sources.jsonl", out + "/cur"}, config_with(jobs), log), kExitOk);
    ASSERT_EQ(cmd_eval({out + "/cur/manifest.jsonl", out + "/eval"}, config_with(jobs), log), kExitOk);
    trees.push_back(tree_contents(out));
  }
  // eval_summary records the manifest path, which differs between runs.
  for (auto& t : trees) t.erase("eval/eval_summary.json");
  EXPECT_EQ(trees[0], trees[1]);
  EXPECT_EQ(trees[0], trees[2]);
}

TEST(CliBench, ReplayOfDemoTranscripts) {
  TempDir dir("bench");
  demo::write_demo(dir.path());
  BenchInputs in;
  in.suite = dir / "suite.json";
  in.renders = dir / "renders.jsonl";
  in.transcripts = dir / "transcripts.jsonl";
  in.human_pairwise = dir / "human_pairwise.csv";
  in.human_singles = dir / "human_singles.csv";
  in.metric_scores = dir / "metric_scores.jsonl";
  std::ostringstream log;
  std::vector<std::string> reports;
  for (std::size_t jobs : {1u, 4u}) {
    in.out = dir / ("out" + std::to_string(jobs));
    ASSERT_EQ(cmd_bench(in, config_with(jobs), log), kExitOk) << log.str();
    reports.push_back(slurp(in.out + "/bench_report.json") + slurp(in.out + "/judgments.jsonl"));
    // Replaying and re-recording reproduces the transcript exactly.
    EXPECT_EQ(slurp(in.out + "/transcript.jsonl"), slurp(dir / "transcripts.jsonl"));
  }
  EXPECT_EQ(reports[0], reports[1]);

  const json r = read_json_file(dir / "out1/bench_report.json");
  EXPECT_EQ(r["consistency"]["unscored"], 1);
  EXPECT_TRUE(r["consistency"]["acceptable"].get<bool>());
  EXPECT_GT(r["consistency"]["per_model"]["model_a"]["accuracy"].get<double>(),
            r["consistency"]["per_model"]["model_c"]["accuracy"].get<double>());
  EXPECT_FALSE(r["human"]["revisions"].empty());
  for (const auto& [metric, per_model] : r["radar"].items()) {
    double hi = 0.0, lo = 1.0;
    for (const auto& [m, v] : per_model.items()) {
      hi = std::max(hi, v.get<double>());
      lo = std::min(lo, v.get<double>());
    }
    EXPECT_EQ(hi, 1.0) << metric;
    EXPECT_EQ(lo, 0.2) << metric;
  }
  // Noisier models jitter more, and humans prefer the quieter ones.
  EXPECT_DOUBLE_EQ(r["metrics"]["jitter_degree"]["human_correlation"].get<double>(), 1.0);
}

TEST(CliBench, TooManyUnscoredAndMissingInputs) {
  TempDir dir("bench-unscored");
  demo::write_demo(dir.path());
  std::string kept;
  for (const json& x : read_jsonl_file(dir / "transcripts.jsonl")) {
    if (x["service"] == "judge" && x["request"]["render_ref"].get<std::string>().find("model_b") != std::string::npos) continue;
    kept += x.dump() + "\n";
  }
  spit(dir.path() / "partial.jsonl", kept);
  BenchInputs in;
  in.suite = dir / "suite.json";
  in.renders = dir / "renders.jsonl";
  in.transcripts = dir / "partial.jsonl";
  in.out = dir / "out";
  std::ostringstream log;
  EXPECT_EQ(cmd_bench(in, config_with(1), log), kExitUnscored);
  const json r = read_json_file(dir / "out/bench_report.json");
  EXPECT_EQ(r["consistency"]["unscored"], 13);
  EXPECT_FALSE(r["consistency"]["acceptable"].get<bool>());

  in.transcripts.reset();
  EXPECT_EQ(cmd_bench(in, config_with(1), log), kExitError);
  in.suite.reset();
  in.renders.reset();
  EXPECT_EQ(cmd_bench(in, config_with(1), log), kExitEmpty);
  // A different seed draws different distractors, so the recorded judge answers no longer apply.
  in.suite = dir / "suite.json";
  in.renders = dir / "renders.jsonl";
  in.transcripts = dir / "transcripts.jsonl";
  EXPECT_EQ(cmd_bench(in, config_with(1, 5), log), kExitUnscored);
}

TEST(CliBench, HashingEmbedderNeedsOnlyJudgeTranscripts) {
  TempDir dir("bench-hash");
  demo::write_demo(dir.path());
  std::string judge_only;
  for (const json& x : read_jsonl_file(dir / "transcripts.jsonl")) {
    if (x["service"] == "judge") judge_only += x.dump() + "\n";
  }
  spit(dir.path() / "judge.jsonl", judge_only);
  BenchInputs in;
  in.suite = dir / "suite.json";
  in.renders = dir / "renders.jsonl";
  in.transcripts = dir / "judge.jsonl";
  in.out = dir / "out";
  RunConfig c = config_with(1);
  c.bench.embedder = "hashing";
  std::ostringstream log;
  EXPECT_EQ(cmd_bench(in, c, log), kExitOk) << log.str();
  EXPECT_EQ(read_json_file(dir / "out/bench_report.json")["consistency"]["unscored"], 1);
}

TEST(CliFlow, DistilledDatasetIsSeededAndJobIndependent) {
  TempDir dir("flow");
  demo::write_demo(dir.path());
  std::ostringstream log;
  RunConfig c = config_with(1, 3);
  ASSERT_EQ(cmd_flow({dir / "flow_prompts.json", dir / "a"}, c, log), kExitOk) << log.str();
  c.jobs = 8;
  ASSERT_EQ(cmd_flow({dir / "flow_prompts.json", dir / "b"}, c, log), kExitOk);
  EXPECT_TRUE(tree_contents(dir.path() / "a") == tree_contents(dir.path() / "b"));
  EXPECT_EQ(read_json_file(dir / "a/flow_summary.json")["config"]["seed"], 3);

  const auto rows = read_jsonl_file(dir / "a/dataset.jsonl");
  ASSERT_EQ(rows.size(), 6u);
  for (const json& row : rows) {
    EXPECT_EQ(row["status"], "ok");
    EXPECT_EQ(row["weight"], 2.0);
    const auto t = flow::read_tensor_f32(dir / ("a/" + row["data_path"].get<std::string>()), 100, 6);
    // Euler steps along the straight path land on the condition target.
    const flow::Condition cond = flow::condition_from_json(row["condition"]);
    EXPECT_LT((t - flow::condition_target(cond, 100, 6)).cwiseAbs().maxCoeff(), 1e-5);
    if (!row["condition"].contains("reference_motion")) {
      EXPECT_EQ(row["training_branch"], "T2M");
    }
  }
  // alignment scores 0, 0.4, 0.8 against tau 0.5
  EXPECT_EQ(rows[0]["inference_branch"], "T2M");
  EXPECT_EQ(rows[2]["inference_branch"], "T2M");
  EXPECT_EQ(rows[4]["inference_branch"], "M2M");
  EXPECT_FALSE(rows[1].contains("inference_branch"));
}

TEST(CliRadarAndWinRatio, SmallTables) {
  TempDir dir("radar");
  demo::write_demo(dir.path());
  std::ostringstream log;
  ASSERT_EQ(cmd_radar({dir / "radar_input.json", dir / "r"}, config_with(1), log), kExitOk);
  const json r = read_json_file(dir / "r/radar.json")["radar"];
  EXPECT_EQ(r["jitter_degree"]["model_a"], 1.0);
  EXPECT_EQ(r["jitter_degree"]["model_c"], 0.2);
  EXPECT_NEAR(r["consistency"]["model_b"].get<double>(), 0.6, 1e-12);

  spit(dir.path() / "pw.csv", "prompt_id,model_a,model_b,outcome\np1,x,y,a\np2,x,y,tie\np3,y,x,b\n");
  ASSERT_EQ(cmd_winratio({dir / "pw.csv", std::nullopt, dir / "w"}, config_with(1), log), kExitOk);
  const json w = read_json_file(dir / "w/winratio.json");
  EXPECT_NEAR(w["win_ratio"]["x"]["ratio"].get<double>(), 2.5 / 3.0, 1e-12);
  EXPECT_NEAR(w["win_ratio"]["y"]["ratio"].get<double>(), 0.5 / 3.0, 1e-12);
  EXPECT_TRUE(w["revisions"].empty());

  spit(dir.path() / "bad.csv", "prompt_id,model_a,model_b,outcome\np1,x,y,maybe\n");
  EXPECT_EQ(cmd_winratio({dir / "bad.csv", std::nullopt, dir / "w2"}, config_with(1), log), kExitError);
}
