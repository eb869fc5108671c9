#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "motionkit/core/error.hpp"

namespace motionkit::bench {

using Embedding = std::vector<double>;

inline double dot(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) throw InvalidArgument("embedding dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double cosine(const Embedding& a, const Embedding& b) {
  const double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("cosine similarity of a zero vector");
  return dot(a, b) / (na * nb);
}

inline double squared_distance(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) throw InvalidArgument("embedding dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline Embedding normalized(Embedding v) {
  const double n = std::sqrt(dot(v, v));
  if (n == 0.0) throw InvalidArgument("cannot normalize a zero vector");
  for (double& x : v) x /= n;
  return v;
}

}  // namespace motionkit::bench
