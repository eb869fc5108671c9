#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "motionkit/flowmatch/kernel.hpp"
#include "motionkit/flowmatch/tensor_io.hpp"
#include "motionkit/util/json_util.hpp"
#include "motionkit/util/parallel.hpp"

namespace motionkit::flow {

inline Tensor gaussian_noise(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Tensor x(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) x(r, c) = n(rng);
  }
  return x;
}

// Stand-in for a video-derived reference: the clean motion plus Gaussian
// noise of standard deviation sigma.
inline Tensor simulate_reference(const Tensor& x0, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw InvalidArgument("reference noise sigma must be >= 0");
  if (sigma == 0.0) return x0;
  return x0 + sigma * gaussian_noise(x0.rows(), x0.cols(), seed);
}

// Deterministic pseudo-motion for a condition, smooth along the frame axis.
inline Tensor condition_target(const Condition& c, Eigen::Index rows, Eigen::Index cols) {
  Tensor mu(rows, cols);
  const std::uint64_t h = c.hash();
  for (Eigen::Index d = 0; d < cols; ++d) {
    const double amp = 0.5 + counter_uniform(h, 2 * static_cast<std::uint64_t>(d));
    const double phase = 6.283185307179586 * counter_uniform(h, 2 * static_cast<std::uint64_t>(d) + 1);
    for (Eigen::Index r = 0; r < rows; ++r) {
      mu(r, d) = amp * std::sin(phase + 0.15 * static_cast<double>(r) + 0.3 * static_cast<double>(d));
    }
  }
  return mu;
}

// Straight path from the current state to the per-condition target:
// v = (mu(c) - x) / (1 - t). Euler integration lands on mu(c) exactly.
class TowardTargetField : public VelocityField {
 public:
  Tensor operator()(const Tensor& x, double t, const Condition& c) const override {
    const Tensor mu = condition_target(c, x.rows(), x.cols());
    if (1.0 - t < 1e-12) return Tensor::Zero(x.rows(), x.cols());
    return (mu - x) / (1.0 - t);
  }
};

// Maps a condition and its noise to a motion.
using Teacher = std::function<Tensor(const Condition&, const Tensor& eps)>;

inline Teacher ode_teacher(const VelocityField& field, int steps, Integrator integrator = Integrator::euler) {
  return [&field, steps, integrator](const Condition& c, const Tensor& eps) {
    return sample_ode(field, eps, steps, c, integrator);
  };
}

struct DistillOptions {
  Eigen::Index frames = 100;
  Eigen::Index features = 6;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  double weight = 2.0;  // teacher-generated (synthetic) samples count double in training
};

struct DistilledSample {
  Condition condition;
  std::optional<Tensor> motion;        // empty when the teacher failed
  std::optional<std::string> failure;  // diagnostic for failed entries
  bool ok() const { return motion.has_value(); }
};

// Noise depends only on (prompt id, seed), so repeated ids reproduce the
// same sample and results never depend on scheduling.
inline std::uint64_t prompt_noise_seed(const Condition& c, std::uint64_t seed) { return c.hash() ^ splitmix64(seed); }

inline std::vector<DistilledSample> distill_dataset(const Teacher& teacher, const std::vector<Condition>& prompts,
                                                    const DistillOptions& opt) {
  if (prompts.empty()) throw InvalidArgument("distill_dataset needs at least one prompt");
  if (opt.frames < 1 || opt.features < 1) throw InvalidArgument("distilled tensor shape must be positive");
  return parallel_map(prompts.size(), opt.jobs, [&](std::size_t i) {
    const Condition& c = prompts[i];
    DistilledSample s{c, std::nullopt, std::nullopt};
    try {
      Tensor x = teacher(c, gaussian_noise(opt.frames, opt.features, prompt_noise_seed(c, opt.seed)));
      if (x.rows() != opt.frames || x.cols() != opt.features) throw InvalidArgument("teacher returned the wrong shape");
      if (!x.allFinite()) throw InvalidArgument("teacher returned non-finite values");
      s.motion = std::move(x);
    } catch (const std::exception& e) {
      s.failure = e.what();
    }
    return s;
  });
}

inline ordered_json condition_to_json(const Condition& c) {
  ordered_json j;
  j["id"] = c.id;
  j["text"] = c.text;
  if (c.reference_motion) j["reference_motion"] = *c.reference_motion;
  return j;
}

inline Condition condition_from_json(const json& j) {
  try {
    Condition c;
    c.id = j.at("id").get<std::string>();
    c.text = j.value("text", std::string{});
    if (j.contains("reference_motion")) c.reference_motion = j.at("reference_motion").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("condition: ") + e.what());
  }
}

// Writes dataset.jsonl plus tensors/NNNNN.f32 under out_dir and returns the
// manifest rows. Failed entries carry "status": "failed" and no data_path.
inline std::vector<ordered_json> write_distilled(const std::filesystem::path& out_dir,
                                                 const std::vector<DistilledSample>& samples,
                                                 const DistillOptions& opt) {
  std::filesystem::create_directories(out_dir / "tensors");
  std::vector<ordered_json> rows;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DistilledSample& s = samples[i];
    ordered_json row;
    row["prompt_id"] = s.condition.id;
    row["condition"] = condition_to_json(s.condition);
    row["shape"] = {opt.frames, opt.features};
    if (s.ok()) {
      char name[32];
      std::snprintf(name, sizeof name, "tensors/%05zu.f32", i);
      write_tensor_f32((out_dir / name).string(), *s.motion);
      row["data_path"] = name;
      row["weight"] = opt.weight;
      row["status"] = "ok";
    } else {
      row["data_path"] = nullptr;
      row["weight"] = 0.0;
      row["status"] = "failed";
      row["error"] = *s.failure;
    }
    rows.push_back(std::move(row));
  }
  write_text_file((out_dir / "dataset.jsonl").string(), to_jsonl(rows));
  return rows;
}

}  // namespace motionkit::flow
