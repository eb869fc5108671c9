#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "motionkit/core/error.hpp"
#include "motionkit/util/hash.hpp"

namespace motionkit::flow {

enum class Branch { t2m, m2m };

inline std::string branch_name(Branch b) { return b == Branch::t2m ? "T2M" : "M2M"; }

struct BranchProbabilities {
  double p_t2m = 0.5;
  double p_m2m = 0.5;

  void validate() const {
    if (p_t2m < 0.0 || p_m2m < 0.0 || std::abs(p_t2m + p_m2m - 1.0) > 1e-9) {
      throw InvalidArgument("branch probabilities must be >= 0 and sum to 1");
    }
  }
};

// curated: the high-quality text-motion corpus; other: everything else.
enum class DataKind { curated, other };

inline DataKind parse_data_kind(const std::string& s) {
  if (s == "curated") return DataKind::curated;
  if (s == "other") return DataKind::other;
  throw InvalidArgument("unknown data kind '" + s + "' (expected curated or other)");
}

inline BranchProbabilities training_branch_probabilities(DataKind kind) {
  return kind == DataKind::curated ? BranchProbabilities{0.8, 0.2} : BranchProbabilities{0.4, 0.6};
}

// High text/video alignment routes to the motion-to-motion branch; a score
// exactly at tau counts as high.
inline Branch select_branch(double alignment_score, double tau) {
  if (!(alignment_score >= 0.0 && alignment_score <= 1.0)) throw InvalidArgument("alignment score must lie in [0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("tau must lie in [0, 1]");
  return alignment_score >= tau ? Branch::m2m : Branch::t2m;
}

inline Branch draw_training_branch(const BranchProbabilities& p, std::uint64_t seed, std::uint64_t counter) {
  p.validate();
  return counter_uniform(seed, counter) < p.p_t2m ? Branch::t2m : Branch::m2m;
}

inline Branch draw_training_branch(DataKind kind, std::uint64_t seed, std::uint64_t counter) {
  return draw_training_branch(training_branch_probabilities(kind), seed, counter);
}

}  // namespace motionkit::flow
