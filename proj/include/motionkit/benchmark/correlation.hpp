#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "motionkit/core/error.hpp"

namespace motionkit::bench {

enum class CorrelationMethod { pearson, spearman };

inline CorrelationMethod parse_correlation_method(const std::string& s) {
  if (s == "pearson") return CorrelationMethod::pearson;
  if (s == "spearman") return CorrelationMethod::spearman;
  throw InvalidArgument("unknown correlation method '" + s + "'");
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("correlation inputs differ in length");
  if (x.size() < 2) throw InvalidArgument("correlation needs at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw InvalidArgument("correlation of a constant vector is undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    i = j + 1;
  }
  return rank;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("correlation inputs differ in length");
  return pearson(average_ranks(x), average_ranks(y));
}

inline double correlate(const std::vector<double>& x, const std::vector<double>& y, CorrelationMethod m) {
  return m == CorrelationMethod::pearson ? pearson(x, y) : spearman(x, y);
}

// Correlates two per-model tables over the models present in both.
inline double correlate(const std::map<std::string, double>& metric, const std::map<std::string, double>& human,
                        CorrelationMethod m) {
  std::vector<double> x, y;
  for (const auto& [model, v] : metric) {
    if (auto it = human.find(model); it != human.end()) {
      x.push_back(v);
      y.push_back(it->second);
    }
  }
  return correlate(x, y, m);
}

}  // namespace motionkit::bench
