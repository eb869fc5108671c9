#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "motionkit/benchmark/embedding.hpp"
#include "motionkit/util/hash.hpp"

namespace motionkit::bench {

struct ClusterOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  double dup_threshold = 0.98;
  std::size_t max_iterations = 200;
  double tolerance = 1e-6;
};

struct ClusterResult {
  std::vector<std::size_t> distinct;                // indices surviving dedup, in input order
  std::vector<std::optional<std::size_t>> duplicate_of;  // per input item
  std::vector<std::size_t> assignment;              // per input item; duplicates share their original's cluster
  std::vector<std::size_t> representatives;         // per cluster: distinct item nearest the centroid
  std::vector<Embedding> centroids;
  std::size_t iterations = 0;
};

// Items whose cosine similarity to an earlier kept item exceeds the
// threshold are dropped as duplicates of the first such item.
inline ClusterResult dedup_and_cluster(const std::vector<Embedding>& items, const ClusterOptions& opt) {
  if (opt.k == 0) throw InvalidArgument("k must be >= 1");
  if (opt.k > items.size()) throw InvalidArgument("k exceeds the number of items");
  ClusterResult res;
  res.duplicate_of.assign(items.size(), std::nullopt);
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j : res.distinct) {
      if (cosine(items[i], items[j]) > opt.dup_threshold) {
        res.duplicate_of[i] = j;
        break;
      }
    }
    if (!res.duplicate_of[i]) res.distinct.push_back(i);
  }
  const std::size_t m = res.distinct.size();
  if (opt.k > m) throw InvalidArgument("k exceeds the number of distinct items after dedup");
  const auto& pt = [&](std::size_t d) -> const Embedding& { return items[res.distinct[d]]; };

  // Farthest-point seeding from a seeded start.
  const auto first = std::min(m - 1, static_cast<std::size_t>(counter_uniform(opt.seed, 0) * static_cast<double>(m)));
  res.centroids.push_back(pt(first));
  std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
  while (res.centroids.size() < opt.k) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t d = 0; d < m; ++d) {
      nearest[d] = std::min(nearest[d], squared_distance(pt(d), res.centroids.back()));
      if (nearest[d] > best_d) {
        best_d = nearest[d];
        best = d;
      }
    }
    res.centroids.push_back(pt(best));
  }

  std::vector<std::size_t> label(m, 0);
  auto assign = [&] {
    for (std::size_t d = 0; d < m; ++d) {
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < opt.k; ++c) {
        const double dd = squared_distance(pt(d), res.centroids[c]);
        if (dd < bd) {
          bd = dd;
          label[d] = c;
        }
      }
    }
  };
  const std::size_t dim = res.centroids.front().size();
  for (res.iterations = 0; res.iterations < opt.max_iterations;) {
    assign();
    ++res.iterations;
    std::vector<Embedding> sum(opt.k, Embedding(dim, 0.0));
    std::vector<std::size_t> count(opt.k, 0);
    for (std::size_t d = 0; d < m; ++d) {
      for (std::size_t i = 0; i < dim; ++i) sum[label[d]][i] += pt(d)[i];
      ++count[label[d]];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < opt.k; ++c) {
      if (count[c] == 0) continue;  // empty cluster keeps its centroid
      for (double& v : sum[c]) v /= static_cast<double>(count[c]);
      shift = std::max(shift, std::sqrt(squared_distance(sum[c], res.centroids[c])));
      res.centroids[c] = std::move(sum[c]);
    }
    if (shift < opt.tolerance) break;
  }
  assign();

  // Representative: the member nearest the centroid (any item, should a
  // cluster end up empty).
  res.representatives.assign(opt.k, 0);
  for (std::size_t c = 0; c < opt.k; ++c) {
    double best = std::numeric_limits<double>::infinity();
    bool has_members = false;
    for (std::size_t d = 0; d < m; ++d) has_members = has_members || label[d] == c;
    for (std::size_t d = 0; d < m; ++d) {
      if (has_members && label[d] != c) continue;
      const double dd = squared_distance(pt(d), res.centroids[c]);
      if (dd < best) {
        best = dd;
        res.representatives[c] = res.distinct[d];
      }
    }
  }
  res.assignment.assign(items.size(), 0);
  for (std::size_t d = 0; d < m; ++d) res.assignment[res.distinct[d]] = label[d];
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (res.duplicate_of[i]) res.assignment[i] = res.assignment[*res.duplicate_of[i]];
  }
  return res;
}

}  // namespace motionkit::bench
