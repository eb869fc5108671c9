#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "motionkit/benchmark/embedding.hpp"
#include "motionkit/util/hash.hpp"

namespace motionkit::bench {

struct PercentileBand {
  int lo;  // inclusive, percent
  int hi;  // exclusive, percent
};

inline constexpr PercentileBand kDistractorBands[3] = {{0, 5}, {47, 52}, {95, 100}};
inline constexpr std::size_t kPerBand = 3;
inline constexpr std::size_t kDistractorCount = 9;

// Rank r (0 = least similar of n) lies in the band iff lo <= 100 r / n < hi.
inline std::pair<std::size_t, std::size_t> band_ranks(PercentileBand b, std::size_t n) {
  const auto ceil_div = [](std::size_t a, std::size_t d) { return (a + d - 1) / d; };
  return {ceil_div(static_cast<std::size_t>(b.lo) * n, 100), ceil_div(static_cast<std::size_t>(b.hi) * n, 100)};
}

struct Distractor {
  std::string id;
  std::size_t rank = 0;  // position in the ascending-similarity order
  double similarity = 0.0;
  int band = 0;         // 0 low, 1 middle, 2 high
  bool filled = false;  // taken from outside the band to cover a deficit
};

// Deterministic partial Fisher-Yates: the first k of `items` become a
// seeded uniform sample without replacement.
template <class T>
void seeded_sample_prefix(std::vector<T>& items, std::size_t k, std::uint64_t seed) {
  k = std::min(k, items.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t span = items.size() - i;
    const auto j = i + std::min(span - 1, static_cast<std::size_t>(counter_uniform(seed, i) * static_cast<double>(span)));
    std::swap(items[i], items[j]);
  }
}

// Nine distractors for `gt_id`, three per similarity band. Candidates are
// ranked by ascending cosine similarity to the ground truth (ties by id).
// A band with fewer than three members is topped up with the nearest
// unselected ranks outside it (closest first, lower rank on ties).
inline std::vector<Distractor> select_distractors(const std::string& gt_id,
                                                  const std::map<std::string, Embedding>& embeddings,
                                                  std::uint64_t seed) {
  const auto gt = embeddings.find(gt_id);
  if (gt == embeddings.end()) throw InvalidArgument("ground truth '" + gt_id + "' has no embedding");
  struct Ranked {
    std::string id;
    double sim;
  };
  std::vector<Ranked> pool;
  for (const auto& [id, e] : embeddings) {
    if (id != gt_id) pool.push_back({id, cosine(gt->second, e)});
  }
  if (pool.size() < kDistractorCount) {
    throw InvalidArgument("need at least 9 candidates besides the ground truth, got " + std::to_string(pool.size()));
  }
  std::sort(pool.begin(), pool.end(), [](const Ranked& a, const Ranked& b) {
    return a.sim != b.sim ? a.sim < b.sim : a.id < b.id;
  });
  const std::size_t n = pool.size();
  std::vector<bool> taken(n, false);
  std::vector<Distractor> out;
  auto take = [&](std::size_t r, int band, bool filled) {
    taken[r] = true;
    out.push_back({pool[r].id, r, pool[r].sim, band, filled});
  };
  if (n == kDistractorCount) {
    for (std::size_t r = 0; r < n; ++r) {
      int band = 1;
      for (int b = 0; b < 3; ++b) {
        const auto [lo, hi] = band_ranks(kDistractorBands[b], n);
        if (r >= lo && r < hi) band = b;
      }
      take(r, band, false);
    }
    return out;
  }

  const std::uint64_t base = splitmix64(seed) ^ fnv1a64(gt_id);
  std::size_t deficit[3] = {0, 0, 0};
  for (int b = 0; b < 3; ++b) {
    const auto [lo, hi] = band_ranks(kDistractorBands[b], n);
    std::vector<std::size_t> members;
    for (std::size_t r = lo; r < hi; ++r) members.push_back(r);
    seeded_sample_prefix(members, kPerBand, base + static_cast<std::uint64_t>(b));
    const std::size_t k = std::min(kPerBand, members.size());
    std::vector<std::size_t> chosen(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t r : chosen) take(r, b, false);
    deficit[b] = kPerBand - k;
  }
  for (int b = 0; b < 3; ++b) {
    const auto [lo, hi] = band_ranks(kDistractorBands[b], n);
    auto dist = [&](std::size_t r) { return r < lo ? lo - r : (r >= hi ? r - hi + 1 : 0); };
    std::vector<std::size_t> order;
    for (std::size_t r = 0; r < n; ++r) {
      if (!taken[r]) order.push_back(r);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return dist(a) < dist(c); });
    for (std::size_t i = 0; i < deficit[b] && i < order.size(); ++i) take(order[i], b, true);
  }
  return out;
}

// Ground truth plus distractors in a seeded order, as offered to a judge.
inline std::vector<std::string> candidate_labels(const std::string& gt, const std::vector<std::string>& distractors,
                                                 std::uint64_t seed) {
  std::vector<std::string> labels{gt};
  labels.insert(labels.end(), distractors.begin(), distractors.end());
  seeded_sample_prefix(labels, labels.size(), splitmix64(seed) ^ fnv1a64(gt) ^ 0x5bd1e995ULL);
  return labels;
}

}  // namespace motionkit::bench
