#include <iostream>

#include <CLI11.hpp>

#include "motionkit/cli/commands.hpp"

using namespace motionkit;
using namespace motionkit::cli;

namespace {

struct Common {
  Overrides overrides;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.overrides.config_path, "JSON run config")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory")->required();
  sub->add_option("--seed", c.overrides.seed, "random seed");
  sub->add_option("--jobs", c.overrides.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--metrics", c.overrides.metrics, "comma-separated metric names (eval)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motionkit: motion quality metrics, curation, flow distillation and benchmark aggregation"};
  app.require_subcommand(1);

  Common common;
  std::function<int(const RunConfig&)> run;

  EvalInputs eval;
  auto* s_eval = app.add_subcommand("eval", "evaluate quality metrics for every clip in a manifest");
  add_common(s_eval, common);
  s_eval->add_option("manifest", eval.manifest, "clip or source manifest (JSONL)")->required()->check(CLI::ExistingFile);
  s_eval->callback([&] {
    eval.out = common.out;
    run = [&](const RunConfig& c) { return cmd_eval(eval, c, std::cerr); };
  });

  CurateInputs curate;
  auto* s_curate = app.add_subcommand("curate", "segment and filter source motions into a clip manifest");
  add_common(s_curate, common);
  s_curate->add_option("manifest", curate.manifest, "source manifest (JSONL)")->required()->check(CLI::ExistingFile);
  s_curate->callback([&] {
    curate.out = common.out;
    run = [&](const RunConfig& c) { return cmd_curate(curate, c, std::cerr); };
  });

  BenchInputs bench;
  auto* s_bench = app.add_subcommand("bench", "aggregate benchmark results");
  add_common(s_bench, common);
  s_bench->add_option("--suite", bench.suite, "prompt suite JSON")->check(CLI::ExistingFile);
  s_bench->add_option("--renders", bench.renders, "renders manifest JSONL")->check(CLI::ExistingFile);
  s_bench->add_option("--transcripts", bench.transcripts, "recorded judge/embedder exchanges")->check(CLI::ExistingFile);
  s_bench->add_flag("--live", bench.live, "call the configured endpoints instead of replaying");
  s_bench->add_option("--human-pairwise", bench.human_pairwise, "pairwise annotation CSV")->check(CLI::ExistingFile);
  s_bench->add_option("--human-singles", bench.human_singles, "single-video rating CSV")->check(CLI::ExistingFile);
  s_bench->add_option("--metric-scores", bench.metric_scores, "per-(prompt, model) metric JSONL")->check(CLI::ExistingFile);
  s_bench->callback([&] {
    bench.out = common.out;
    run = [&](const RunConfig& c) { return cmd_bench(bench, c, std::cerr); };
  });

  FlowInputs flow;
  auto* s_flow = app.add_subcommand("flow", "distill a synthetic (prompt, motion) dataset");
  add_common(s_flow, common);
  s_flow->add_option("prompts", flow.prompts, "prompt list JSON")->required()->check(CLI::ExistingFile);
  s_flow->callback([&] {
    flow.out = common.out;
    run = [&](const RunConfig& c) { return cmd_flow(flow, c, std::cerr); };
  });

  RadarInputs radar;
  auto* s_radar = app.add_subcommand("radar", "normalize per-model scores for radar charts");
  add_common(s_radar, common);
  s_radar->add_option("input", radar.input, "metric table JSON")->required()->check(CLI::ExistingFile);
  s_radar->callback([&] {
    radar.out = common.out;
    run = [&](const RunConfig& c) { return cmd_radar(radar, c, std::cerr); };
  });

  WinRatioInputs wr;
  auto* s_wr = app.add_subcommand("winratio", "win ratios from pairwise annotations");
  add_common(s_wr, common);
  s_wr->add_option("pairwise", wr.pairwise, "pairwise annotation CSV")->required()->check(CLI::ExistingFile);
  s_wr->add_option("--singles", wr.singles, "single-video rating CSV for reconciliation")->check(CLI::ExistingFile);
  s_wr->callback([&] {
    wr.out = common.out;
    run = [&](const RunConfig& c) { return cmd_winratio(wr, c, std::cerr); };
  });

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = resolve_config(common.overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return run(cfg);
}
