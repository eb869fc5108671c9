#pragma once

#include <algorithm>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "motionkit/core/error.hpp"
#include "motionkit/util/json_util.hpp"

namespace motionkit::bench {

enum class Outcome { a_wins, b_wins, tie };

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::a_wins: return "a";
    case Outcome::b_wins: return "b";
    case Outcome::tie: return "tie";
  }
  return "?";
}

inline Outcome parse_outcome(const std::string& s) {
  if (s == "a") return Outcome::a_wins;
  if (s == "b") return Outcome::b_wins;
  if (s == "tie") return Outcome::tie;
  throw ParseError("outcome must be a, b or tie (got '" + s + "')");
}

struct PairwiseComparison {
  std::string prompt_id;
  std::string model_a;
  std::string model_b;
  Outcome outcome = Outcome::tie;

  void validate() const {
    if (model_a == model_b) throw InvalidArgument("comparison of model '" + model_a + "' with itself");
  }
  friend bool operator==(const PairwiseComparison&, const PairwiseComparison&) = default;
};

// All unordered pairs (a < b), lexicographic.
inline std::vector<std::pair<std::string, std::string>> make_pairings(std::vector<std::string> models) {
  std::sort(models.begin(), models.end());
  if (std::adjacent_find(models.begin(), models.end()) != models.end()) throw InvalidArgument("duplicate model id");
  if (models.size() < 2) throw InvalidArgument("pairings need at least 2 models");
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) out.emplace_back(models[i], models[j]);
  }
  return out;
}

struct ModelTally {
  double score = 0.0;
  std::size_t comparisons = 0;
  double ratio() const { return comparisons ? score / static_cast<double>(comparisons) : 0.0; }
};

struct WinRatioTable {
  std::map<std::string, ModelTally> models;

  double ratio(const std::string& m) const { return models.at(m).ratio(); }
  std::map<std::string, double> ratios() const {
    std::map<std::string, double> out;
    for (const auto& [m, t] : models) out[m] = t.ratio();
    return out;
  }
};

// Win 1, loss 0, tie 0.5 to each side.
inline WinRatioTable win_ratio(const std::vector<PairwiseComparison>& comparisons) {
  if (comparisons.empty()) throw InvalidArgument("win_ratio needs at least one comparison");
  WinRatioTable t;
  for (const auto& c : comparisons) {
    c.validate();
    auto& a = t.models[c.model_a];
    auto& b = t.models[c.model_b];
    ++a.comparisons;
    ++b.comparisons;
    switch (c.outcome) {
      case Outcome::a_wins: a.score += 1.0; break;
      case Outcome::b_wins: b.score += 1.0; break;
      case Outcome::tie:
        a.score += 0.5;
        b.score += 0.5;
        break;
    }
  }
  return t;
}

inline ordered_json win_ratio_to_json(const WinRatioTable& t) {
  ordered_json j = ordered_json::object();
  for (const auto& [m, tally] : t.models) {
    j[m] = {{"ratio", tally.ratio()}, {"score", tally.score}, {"comparisons", tally.comparisons}};
  }
  return j;
}

// Pairwise comparisons implied by a per-(prompt, model) metric: within each
// prompt every model pair is compared, equal values tie.
inline std::vector<PairwiseComparison> metric_comparisons(
    const std::map<std::pair<std::string, std::string>, double>& values, bool higher_is_better) {
  std::map<std::string, std::map<std::string, double>> by_prompt;
  for (const auto& [key, v] : values) by_prompt[key.first][key.second] = v;
  std::vector<PairwiseComparison> out;
  for (const auto& [prompt, models] : by_prompt) {
    for (auto a = models.begin(); a != models.end(); ++a) {
      for (auto b = std::next(a); b != models.end(); ++b) {
        Outcome o = Outcome::tie;
        if (a->second != b->second) o = (a->second > b->second) == higher_is_better ? Outcome::a_wins : Outcome::b_wins;
        out.push_back({prompt, a->first, b->first, o});
      }
    }
  }
  return out;
}

// Single-video ratings on the 0-2 scale keyed by (prompt_id, model).
struct SingleRatings {
  std::map<std::pair<std::string, std::string>, std::vector<int>> ratings;

  void add(const std::string& prompt_id, const std::string& model, int rating) {
    if (rating < 0 || rating > 2) throw InvalidArgument("single rating must be 0, 1 or 2");
    ratings[{prompt_id, model}].push_back(rating);
  }

  std::optional<double> mean(const std::string& prompt_id, const std::string& model) const {
    const auto it = ratings.find({prompt_id, model});
    if (it == ratings.end() || it->second.empty()) return std::nullopt;
    double s = 0.0;
    for (int r : it->second) s += r;
    return s / static_cast<double>(it->second.size());
  }
};

struct Revision {
  std::size_t index = 0;  // position in the comparison list
  PairwiseComparison before;
  Outcome after = Outcome::tie;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

struct ReconciledComparisons {
  std::vector<PairwiseComparison> comparisons;
  std::vector<Revision> log;
};

// Where the single-video means differ by at least `margin`, the pairwise
// outcome is forced to agree with them. A tie counts as a contradiction of
// a clear single-score difference.
inline ReconciledComparisons reconcile_single_scores(const std::vector<PairwiseComparison>& comparisons,
                                                     const SingleRatings& singles, double margin = 1.0) {
  if (!(margin > 0.0)) throw InvalidArgument("reconciliation margin must be > 0");
  ReconciledComparisons out{comparisons, {}};
  for (std::size_t i = 0; i < out.comparisons.size(); ++i) {
    PairwiseComparison& c = out.comparisons[i];
    const auto ma = singles.mean(c.prompt_id, c.model_a);
    const auto mb = singles.mean(c.prompt_id, c.model_b);
    if (!ma || !mb) {
      throw InvalidArgument("no single rating for prompt '" + c.prompt_id + "' model '" + (!ma ? c.model_a : c.model_b) + "'");
    }
    std::optional<Outcome> verdict;
    if (*ma - *mb >= margin) verdict = Outcome::a_wins;
    if (*mb - *ma >= margin) verdict = Outcome::b_wins;
    if (verdict && *verdict != c.outcome) {
      out.log.push_back({i, c, *verdict, *ma, *mb});
      c.outcome = *verdict;
    }
  }
  return out;
}

inline ordered_json revision_to_json(const Revision& r) {
  ordered_json j;
  j["index"] = r.index;
  j["prompt_id"] = r.before.prompt_id;
  j["model_a"] = r.before.model_a;
  j["model_b"] = r.before.model_b;
  j["from"] = outcome_name(r.before.outcome);
  j["to"] = outcome_name(r.after);
  j["mean_a"] = r.mean_a;
  j["mean_b"] = r.mean_b;
  return j;
}

}  // namespace motionkit::bench
