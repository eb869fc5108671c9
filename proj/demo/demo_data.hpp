#pragma once

// Synthetic inputs for every subcommand: motion sources, a prompt suite with
// renders and recorded judge/embedder transcripts, human annotation CSVs,
// per-(prompt, model) metric scores and a flow prompt list.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "motionkit/flowmatch/distill.hpp"
#include "motionkit/benchmark/consistency.hpp"
#include "motionkit/core/motion_io.hpp"
#include "motionkit/core/perturb.hpp"
#include "motionkit/core/synthetic.hpp"
#include "motionkit/metrics/report.hpp"

namespace motionkit::demo {

namespace fs = std::filesystem;

inline const Skeleton& skeleton() {
  static const Skeleton s = standard_skeleton();
  return s;
}

inline MotionSequence walk_clip(std::size_t frames, double fps = 20.0, std::string id = "walk", double heading = 0.0) {
  return synthetic::walk(skeleton(), {.frames = frames, .fps = fps, .heading_rad = heading}, std::move(id));
}

inline MotionSequence static_clip(std::size_t frames, std::string id = "static") {
  const Skeleton& s = skeleton();
  Frame f = rest_frame(s, {0, 0, standard_rest_root_height()});
  (*f.joint_rotations)[*s.rotation_slot(*s.find_joint("left_elbow"))] = UnitQuat::from_axis_angle({0, 0, -1}, 1.2);
  return MotionSequence(std::move(id), 20.0, s, std::vector<Frame>(frames, f));
}

// Joint positions drawn independently in a 1 m box every frame.
inline MotionSequence white_noise_clip(std::size_t frames, std::uint64_t seed, std::string id = "noise") {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  auto m = synthetic::with_fk_positions(walk_clip(frames, 20.0, std::move(id)));
  std::vector<Frame> fr = m.frames();
  for (Frame& f : fr) {
    for (Vec3& p : *f.joint_positions) p = {u(rng), u(rng), 0.9 + u(rng)};
  }
  return m.with_frames(fr);
}

// lead rest frames, a walk, then tail rest frames.
inline MotionSequence padded_walk(std::size_t lead, std::size_t body, std::size_t tail, std::string id = "padded") {
  const auto w = walk_clip(body);
  std::vector<Frame> fr(lead, rest_frame(skeleton(), w.frame(0).root_translation));
  fr.insert(fr.end(), w.frames().begin(), w.frames().end());
  fr.insert(fr.end(), tail, rest_frame(skeleton(), w.frames().back().root_translation));
  return MotionSequence(std::move(id), 20.0, skeleton(), fr);
}

struct Source {
  std::string file;
  std::string kind;
  MotionSequence motion;
};

inline std::vector<Source> demo_sources(std::uint64_t seed) {
  return {
      {"walk_long.json", "mocap", walk_clip(230, 20.0, "walk_long")},
      {"walk_30fps.json", "mocap", walk_clip(150, 30.0, "walk_30fps")},
      {"padded.json", "mocap", padded_walk(10, 120, 10)},
      {"static.json", "synthetic", static_clip(80)},
      {"noise.json", "synthetic", white_noise_clip(100, seed)},
      {"video_walk.json", "video", perturb(walk_clip(120, 20.0, "video_walk", 0.7), 0.002, seed + 1)},
  };
}

// sources/*.json plus sources.jsonl.
inline void write_sources(const fs::path& dir, std::uint64_t seed) {
  fs::create_directories(dir / "sources");
  std::string manifest;
  for (const Source& s : demo_sources(seed)) {
    write_motion((dir / "sources" / s.file).string(), s.motion);
    manifest += json{{"path", "sources/" + s.file}, {"source_kind", s.kind}, {"caption", "a person: " + s.motion.id()}}.dump() + "\n";
  }
  write_text_file((dir / "sources.jsonl").string(), manifest);
}

inline const std::vector<std::string>& demo_models() {
  static const std::vector<std::string> m = {"model_a", "model_b", "model_c"};
  return m;
}

// Motion noise level per model; lower is better.
inline double model_noise(const std::string& model) {
  return model == "model_a" ? 0.002 : model == "model_b" ? 0.01 : 0.03;
}

inline bench::PromptSuite demo_suite() {
  static const char* texts[] = {
      "a person walks forward slowly",       "a person runs in a circle",
      "someone jumps over a small hurdle",    "a person waves with the right hand",
      "a dancer spins twice on one foot",     "a person sits down on a chair",
      "an athlete performs a cartwheel",      "a person crouches and picks up a box",
      "someone kicks a ball with the left foot", "a person climbs a ladder",
      "a person stretches both arms overhead", "a boxer throws a quick jab",
  };
  bench::PromptSuite s;
  s.name = "demo";
  for (std::size_t i = 0; i < std::size(texts); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "p%02zu", i);
    s.prompts.push_back({id, texts[i], bench::kAllDimensions[i % 4]});
  }
  return s;
}

inline ordered_json suite_to_json(const bench::PromptSuite& s) {
  ordered_json j;
  j["name"] = s.name;
  j["prompts"] = ordered_json::array();
  for (const auto& p : s.prompts) {
    j["prompts"].push_back({{"id", p.id}, {"text", p.text}, {"dimension", bench::dimension_name(p.dimension)}});
  }
  return j;
}

inline std::vector<bench::RenderEntry> demo_renders(const bench::PromptSuite& suite) {
  std::vector<bench::RenderEntry> out;
  for (const auto& m : demo_models()) {
    for (const auto& p : suite.prompts) out.push_back({p.id, m, "renders/" + m + "/" + p.id + ".mp4"});
  }
  return out;
}

// Stands in for the remote services while transcripts are recorded: the
// embedder is the hashing embedder, the judge picks the ground truth with a
// per-model probability and fails outright on one render.
class SimulatedServices : public bench::JsonService {
 public:
  SimulatedServices(const bench::PromptSuite& suite, const std::vector<bench::RenderEntry>& renders, std::uint64_t seed)
      : embedder_(256), embed_service_(embedder_), seed_(seed) {
    for (const auto& r : renders) truth_[r.render_ref] = {suite.find(r.prompt_id)->text, r.model};
  }

  json call(const std::string& service, const json& request) const override {
    if (service == "embedder") return embed_service_.call(service, request);
    if (service != "judge") throw bench::ClientError("unknown service " + service);
    const std::string ref = request.at("render_ref").get<std::string>();
    if (ref == "renders/model_c/p11.mp4") throw bench::ClientError("judge timed out");
    const auto& [gt, model] = truth_.at(ref);
    const double accuracy = model == "model_a" ? 0.9 : model == "model_b" ? 0.6 : 0.3;
    const double u = counter_uniform(fnv1a64(ref) ^ seed_, 0);
    std::string choice = gt;
    if (u >= accuracy) {
      for (const auto& c : request.at("candidates")) {
        if (c != gt) {
          choice = c.get<std::string>();
          break;
        }
      }
    }
    return json{{"choice", choice}, {"score", u}};
  }

 private:
  bench::HashingEmbedder embedder_;
  bench::EmbedderService embed_service_;
  std::map<std::string, std::pair<std::string, std::string>> truth_;
  std::uint64_t seed_;
};

// Per-(prompt, model) metric scores measured on perturbed walks.
inline std::vector<ordered_json> demo_metric_scores(const bench::PromptSuite& suite, std::uint64_t seed) {
  std::vector<ordered_json> rows;
  EvalOptions opt;
  const auto scorer = standard_joint_limits(skeleton());
  const MetricSet sel = {Metric::jitter_degree, Metric::dynamic_degree, Metric::foot_sliding};
  for (std::size_t i = 0; i < suite.prompts.size(); ++i) {
    for (const auto& m : demo_models()) {
      const auto clip = perturb(walk_clip(60), model_noise(m), seed + 1000 * i + fnv1a64(m) % 1000);
      const auto r = evaluate_clip(clip, opt, scorer, sel);
      ordered_json row;
      row["prompt_id"] = suite.prompts[i].id;
      row["model"] = m;
      row["jitter_degree"] = *r.jitter_degree;
      row["dynamic_degree"] = *r.dynamic_degree;
      row["foot_sliding"] = *r.foot_sliding;
      rows.push_back(row);
    }
  }
  return rows;
}

// Pairwise preferences follow model quality with a few ties; single ratings
// (five per render) mostly agree but one prompt's pairwise votes for model_c
// contradict a clear single-score gap.
inline void write_human_csvs(const fs::path& dir, const bench::PromptSuite& suite) {
  const auto& models = demo_models();
  std::string pairwise = "prompt_id,model_a,model_b,outcome\n";
  std::string singles = "prompt_id,model,video_idx,rating\n";
  for (std::size_t i = 0; i < suite.prompts.size(); ++i) {
    const std::string& p = suite.prompts[i].id;
    for (std::size_t a = 0; a < models.size(); ++a) {
      for (std::size_t b = a + 1; b < models.size(); ++b) {
        std::string outcome = (i + a + b) % 5 == 0 ? "tie" : "a";
        if (i == 3 && a == 0 && b == 2) outcome = "b";
        pairwise += p + "," + models[a] + "," + models[b] + "," + outcome + "\n";
      }
    }
    for (std::size_t m = 0; m < models.size(); ++m) {
      for (int v = 0; v < 5; ++v) {
        const int rating = m == 0 ? 2 : m == 1 ? (v % 2 ? 1 : 2) : (v == 0 ? 1 : 0);
        singles += p + "," + models[m] + "," + std::to_string(v) + "," + std::to_string(rating) + "\n";
      }
    }
  }
  write_text_file((dir / "human_pairwise.csv").string(), pairwise);
  write_text_file((dir / "human_singles.csv").string(), singles);
}

inline void write_flow_prompts(const fs::path& dir) {
  ordered_json j;
  j["prompts"] = ordered_json::array();
  const char* texts[] = {"a person walks forward", "a person jumps in place", "a person waves", "a person kicks",
                         "a person turns around", "a person sits down"};
  for (std::size_t i = 0; i < std::size(texts); ++i) {
    ordered_json p;
    p["id"] = "f" + std::to_string(i);
    p["text"] = texts[i];
    if (i % 2 == 0) p["reference_motion"] = "videos/f" + std::to_string(i) + ".mp4";
    if (i % 2 == 0) p["alignment_score"] = 0.2 * static_cast<double>(i);
    j["prompts"].push_back(p);
  }
  write_text_file((dir / "flow_prompts.json").string(), j.dump(2) + "\n");
}

inline void write_radar_input(const fs::path& dir) {
  ordered_json j;
  j["metrics"]["jitter_degree"] = {{"higher_is_better", false}, {"values", {{"model_a", 2.1}, {"model_b", 4.5}, {"model_c", 9.0}}}};
  j["metrics"]["consistency"] = {{"higher_is_better", true}, {"values", {{"model_a", 0.8}, {"model_b", 0.55}, {"model_c", 0.3}}}};
  write_text_file((dir / "radar_input.json").string(), j.dump(2) + "\n");
}

// Writes the whole demo tree under dir. Transcripts are recorded for `seed`,
// which must match the seed the bench replay runs with.
inline void write_demo(const fs::path& dir, std::uint64_t seed = 0) {
  fs::create_directories(dir);
  write_sources(dir, seed);
  const auto suite = demo_suite();
  write_text_file((dir / "suite.json").string(), suite_to_json(suite).dump(2) + "\n");
  const auto renders = demo_renders(suite);
  std::vector<ordered_json> rj;
  for (const auto& r : renders) rj.push_back({{"prompt_id", r.prompt_id}, {"model", r.model}, {"render_ref", r.render_ref}});
  write_text_file((dir / "renders.jsonl").string(), to_jsonl(rj));

  const SimulatedServices sim(suite, renders, seed);
  const bench::RecordingService rec(sim);
  const bench::ServiceJudge judge(rec);
  const bench::ServiceEmbedder embedder(rec);
  bench::run_consistency_eval(suite, renders, judge, embedder, seed);
  write_text_file((dir / "transcripts.jsonl").string(), rec.transcript_jsonl());

  write_text_file((dir / "metric_scores.jsonl").string(), to_jsonl(demo_metric_scores(suite, seed)));
  write_human_csvs(dir, suite);
  write_flow_prompts(dir);
  write_radar_input(dir);
  write_text_file((dir / "config.json").string(),
                  ordered_json{{"seed", seed}, {"curation", {{"clip_len_s", 5.0}, {"min_len_s", 3.0}}}}.dump(2) + "\n");
}

}  // namespace motionkit::demo
