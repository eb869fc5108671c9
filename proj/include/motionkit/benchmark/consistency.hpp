#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "motionkit/benchmark/clients.hpp"
#include "motionkit/benchmark/distractors.hpp"
#include "motionkit/benchmark/suite.hpp"
#include "motionkit/util/parallel.hpp"

namespace motionkit::bench {

// One externally rendered motion video to be judged.
struct RenderEntry {
  std::string prompt_id;
  std::string model;
  std::string render_ref;
};

inline std::vector<RenderEntry> renders_from_jsonl(const std::vector<json>& rows) {
  std::vector<RenderEntry> out;
  for (const json& r : rows) {
    try {
      out.push_back({r.at("prompt_id").get<std::string>(), r.at("model").get<std::string>(),
                     r.at("render_ref").get<std::string>()});
    } catch (const json::exception& e) {
      throw ParseError(std::string("renders manifest: ") + e.what());
    }
  }
  return out;
}

enum class JudgeStatus { correct, incorrect, unscored };

inline std::string judge_status_name(JudgeStatus s) {
  return s == JudgeStatus::correct ? "correct" : s == JudgeStatus::incorrect ? "incorrect" : "unscored";
}

struct JudgedRender {
  RenderEntry render;
  JudgeStatus status = JudgeStatus::unscored;
  std::vector<std::string> candidates;
  std::optional<std::string> choice;
  std::optional<double> score;
  std::optional<std::string> error;
};

struct ModelAccuracy {
  std::size_t correct = 0;
  std::size_t scored = 0;
  std::size_t unscored = 0;
  double accuracy() const { return scored ? static_cast<double>(correct) / static_cast<double>(scored) : 0.0; }
};

struct ConsistencyReport {
  std::vector<JudgedRender> results;  // input order
  std::map<std::string, ModelAccuracy> per_model;
  std::map<std::string, std::map<std::string, ModelAccuracy>> per_model_dimension;

  std::size_t unscored() const {
    std::size_t n = 0;
    for (const auto& r : results) n += r.status == JudgeStatus::unscored;
    return n;
  }
  double unscored_fraction() const {
    return results.empty() ? 0.0 : static_cast<double>(unscored()) / static_cast<double>(results.size());
  }
  // Runs with more than 10% unscored renders are not trustworthy.
  bool acceptable() const { return unscored_fraction() <= 0.10; }
};

// For each render: ground-truth text plus nine distractor prompt texts (by
// embedding similarity bands over the rest of the suite), shuffled, put to
// the judge; correct iff it picks the ground truth. Client failures mark the
// render unscored and the run continues.
inline ConsistencyReport run_consistency_eval(const PromptSuite& suite, const std::vector<RenderEntry>& renders,
                                              const JudgeClient& judge, const EmbeddingProvider& embedder,
                                              std::uint64_t seed, std::size_t jobs = 1) {
  for (const auto& r : renders) {
    if (!suite.find(r.prompt_id)) throw InvalidArgument("render refers to unknown prompt '" + r.prompt_id + "'");
  }
  std::map<std::string, Embedding> emb;
  std::optional<std::string> embed_error;
  try {
    std::vector<std::string> texts;
    for (const auto& p : suite.prompts) texts.push_back(p.text);
    const auto vecs = embedder.embed(texts);
    check_embeddings(vecs, texts.size());
    for (std::size_t i = 0; i < suite.prompts.size(); ++i) emb[suite.prompts[i].id] = vecs[i];
  } catch (const std::exception& e) {
    embed_error = std::string("embedder: ") + e.what();
  }

  ConsistencyReport rep;
  rep.results = parallel_map(renders.size(), jobs, [&](std::size_t i) {
    JudgedRender out{renders[i], JudgeStatus::unscored, {}, {}, {}, {}};
    if (embed_error) {
      out.error = embed_error;
      return out;
    }
    const Prompt& gt = *suite.find(renders[i].prompt_id);
    try {
      std::vector<std::string> distractor_texts;
      for (const auto& d : select_distractors(gt.id, emb, seed)) distractor_texts.push_back(suite.find(d.id)->text);
      out.candidates = candidate_labels(gt.text, distractor_texts, seed);
      const JudgeResponse resp = judge.judge(renders[i].render_ref, out.candidates);
      out.choice = resp.choice;
      out.score = resp.score;
      out.status = resp.choice == gt.text ? JudgeStatus::correct : JudgeStatus::incorrect;
    } catch (const std::exception& e) {
      out.status = JudgeStatus::unscored;
      out.error = e.what();
    }
    return out;
  });
  for (const auto& r : rep.results) {
    const std::string dim = dimension_name(suite.find(r.render.prompt_id)->dimension);
    for (ModelAccuracy* acc : {&rep.per_model[r.render.model], &rep.per_model_dimension[r.render.model][dim]}) {
      if (r.status == JudgeStatus::unscored) {
        ++acc->unscored;
      } else {
        ++acc->scored;
        acc->correct += r.status == JudgeStatus::correct;
      }
    }
  }
  return rep;
}

inline ordered_json judged_render_to_json(const JudgedRender& r) {
  ordered_json j;
  j["prompt_id"] = r.render.prompt_id;
  j["model"] = r.render.model;
  j["render_ref"] = r.render.render_ref;
  j["status"] = judge_status_name(r.status);
  if (!r.candidates.empty()) j["candidates"] = r.candidates;
  if (r.choice) j["choice"] = *r.choice;
  if (r.score) j["score"] = *r.score;
  if (r.error) j["error"] = *r.error;
  return j;
}

inline ordered_json accuracy_to_json(const ModelAccuracy& a) {
  ordered_json j;
  j["accuracy"] = a.accuracy();
  j["correct"] = a.correct;
  j["scored"] = a.scored;
  j["unscored"] = a.unscored;
  return j;
}

}  // namespace motionkit::bench
