#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "motionkit/benchmark/embedding.hpp"
#include "motionkit/metrics/capsule.hpp"

namespace oracle {

using motionkit::Capsule;
using motionkit::Vec3;
using motionkit::bench::Embedding;

// Closed-form point-to-segment distance, the building block of the
// sampling oracle below.
inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + d * t);
}

inline double sampled_capsule_distance(const Capsule& x, const Capsule& y, int samples = 10000) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double u = static_cast<double>(i) / samples;
    best = std::min(best, point_segment_distance(lerp(x.a, x.b, u), y.a, y.b));
    best = std::min(best, point_segment_distance(lerp(y.a, y.b, u), x.a, x.b));
  }
  return best - x.radius - y.radius;
}

inline Capsule random_capsule(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> r(0.01, 0.3);
  const Vec3 a{u(rng), u(rng), u(rng)};
  const int kind = static_cast<int>(rng() % 5);
  Vec3 b{u(rng), u(rng), u(rng)};
  if (kind == 0) b = a;  // point-like
  return {a, b, r(rng)};
}

inline Embedding random_unit(std::mt19937_64& rng, std::size_t dim = 8) {
  std::normal_distribution<double> n(0.0, 1.0);
  Embedding v(dim);
  for (double& x : v) x = n(rng);
  return motionkit::bench::normalized(v);
}

// "gt" plus n random candidates.
inline std::map<std::string, Embedding> candidate_pool(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::string, Embedding> pool;
  pool["gt"] = random_unit(rng);
  for (std::size_t i = 0; i < n; ++i) pool["c" + std::to_string(1000 + i)] = random_unit(rng);
  return pool;
}

// Rank of each candidate by brute-force sort of plain dot products with "gt".
inline std::map<std::string, std::size_t> ranks(const std::map<std::string, Embedding>& pool) {
  std::vector<std::pair<double, std::string>> v;
  for (const auto& [id, e] : pool) {
    if (id == "gt") continue;
    double d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * pool.at("gt")[i];
    v.emplace_back(d, id);
  }
  std::sort(v.begin(), v.end());
  std::map<std::string, std::size_t> rank;
  for (std::size_t r = 0; r < v.size(); ++r) rank[v[r].second] = r;
  return rank;
}

// Exhaustive minimum-SSE 2-partition. Bit i-1 of the result is item i's
// part; item 0 is always in part 0.
inline std::uint32_t optimal_two_partition(const std::vector<Embedding>& items) {
  const std::size_t m = items.size();
  const std::size_t dim = items.front().size();
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < (1u << (m - 1)); ++mask) {
    double sse = 0.0;
    for (int part = 0; part < 2; ++part) {
      std::vector<double> sum(dim, 0.0), sq(dim, 0.0);
      double cnt = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const int p = i == 0 ? 0 : static_cast<int>((mask >> (i - 1)) & 1u);
        if (p != part) continue;
        ++cnt;
        for (std::size_t d = 0; d < dim; ++d) {
          sum[d] += items[i][d];
          sq[d] += items[i][d] * items[i][d];
        }
      }
      if (cnt > 0) {
        for (std::size_t d = 0; d < dim; ++d) sse += sq[d] - sum[d] * sum[d] / cnt;
      }
    }
    if (sse < best) {
      best = sse;
      best_mask = mask;
    }
  }
  return best_mask;
}

}  // namespace oracle
