#include <gtest/gtest.h>

#include "motionkit/flowmatch/branch.hpp"
#include "motionkit/flowmatch/distill.hpp"
#include "test_util.hpp"

using namespace motionkit;
using namespace motionkit::flow;

namespace {

Tensor random_tensor(std::mt19937_64& rng, Eigen::Index r = 7, Eigen::Index c = 5) {
  std::normal_distribution<double> n(0.0, 1.0);
  Tensor x(r, c);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  return x;
}

double max_abs(const Tensor& x) { return x.cwiseAbs().maxCoeff(); }

const Condition kCond{"p0", "a person walks", std::nullopt};

}  // namespace

TEST(Interpolate, EndpointsAndFixedPoint) {
  std::mt19937_64 rng(1);
  const Tensor x0 = random_tensor(rng), eps = random_tensor(rng);
  EXPECT_EQ(interpolate(x0, eps, 0.0), eps);
  EXPECT_EQ(interpolate(x0, eps, 1.0), x0);
  for (double t : {0.0, 0.3, 0.77, 1.0}) EXPECT_LE(max_abs(interpolate(x0, x0, t) - x0), 1e-15);
  // Hand value: 0.25 * 4 + 0.75 * 8.
  EXPECT_DOUBLE_EQ(interpolate(Tensor::Constant(1, 1, 8.0), Tensor::Constant(1, 1, 4.0), 0.75)(0, 0), 7.0);
}

TEST(Interpolate, Errors) {
  EXPECT_THROW(interpolate(Tensor::Zero(2, 3), Tensor::Zero(3, 2), 0.5), InvalidArgument);
  EXPECT_THROW(interpolate(Tensor::Zero(2, 3), Tensor::Zero(2, 3), 1.5), InvalidArgument);
  EXPECT_THROW(interpolate(Tensor::Zero(2, 3), Tensor::Zero(2, 3), -0.1), InvalidArgument);
  EXPECT_THROW(velocity_target(Tensor::Zero(2, 3), Tensor::Zero(2, 2)), InvalidArgument);
}

TEST(Interpolate, AffineInTime) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Tensor x0 = random_tensor(rng), eps = random_tensor(rng);
    const double a = u(rng), b = u(rng);
    const Tensor mid = interpolate(x0, eps, 0.5 * (a + b));
    EXPECT_LE(max_abs(mid - 0.5 * (interpolate(x0, eps, a) + interpolate(x0, eps, b))), 1e-9);
  }
}

TEST(VelocityTarget, ExamplesAndDerivative) {
  std::mt19937_64 rng(3);
  const Tensor eps = random_tensor(rng), v = random_tensor(rng);
  EXPECT_EQ(velocity_target(eps, eps), Tensor::Zero(eps.rows(), eps.cols()));
  EXPECT_LE(max_abs(velocity_target(eps + v, eps) - v), 1e-15);
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  const double h = 1e-4;
  for (int i = 0; i < 1000; ++i) {
    const Tensor x0 = random_tensor(rng, 3, 4), e = random_tensor(rng, 3, 4);
    const double t = u(rng);
    const Tensor fd = (interpolate(x0, e, t + h * 0.5) - interpolate(x0, e, t - h * 0.5)) / h;
    ASSERT_LE(max_abs(fd - velocity_target(x0, e)), 1e-8) << "trial " << i;
  }
}

TEST(FmLoss, OracleZeroAndHandValues) {
  std::mt19937_64 rng(4);
  const Tensor x0 = random_tensor(rng), eps = random_tensor(rng);
  const ConstantField oracle(x0 - eps);
  EXPECT_EQ(fm_loss(oracle, x0, eps, 0.4, kCond), 0.0);

  const ConstantField zero(Tensor::Zero(x0.rows(), x0.cols()));
  const double expect = (x0 - eps).array().square().sum() / static_cast<double>(x0.size());
  EXPECT_NEAR(fm_loss(zero, x0, eps, 0.9, kCond), expect, 1e-12);

  const double k = 0.37;
  const ConstantField shifted((x0 - eps).array() + k);
  EXPECT_NEAR(fm_loss(shifted, x0, eps, 0.2, kCond), k * k, 1e-12);

  // 2x1 hand case: target [3, -1], prediction [0, 0] -> (9 + 1) / 2.
  Tensor a(2, 1), b(2, 1);
  a << 4, 0;
  b << 1, 1;
  EXPECT_DOUBLE_EQ(fm_loss(ConstantField(Tensor::Zero(2, 1)), a, b, 0.5, kCond), 5.0);
}

TEST(FmLoss, NonNegativeAndZeroOnlyAtTarget) {
  std::mt19937_64 rng(5);
  const LinearField lin(-0.5);
  for (int i = 0; i < 100; ++i) {
    const Tensor x0 = random_tensor(rng), eps = random_tensor(rng);
    const double loss = fm_loss(lin, x0, eps, 0.3, kCond);
    EXPECT_GT(loss, 0.0);
    Tensor near = x0 - eps;
    near(0, 0) += 1e-3;
    EXPECT_GT(fm_loss(ConstantField(near), x0, eps, 0.3, kCond), 0.0);
  }
}

TEST(SampleOde, ConstantFieldIsExact) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const Tensor x0 = random_tensor(rng), eps = random_tensor(rng);
    const ConstantField f(x0 - eps);
    EXPECT_LE(max_abs(sample_ode(f, eps, 1, kCond) - x0), 1e-12);
    EXPECT_LE(max_abs(sample_ode(f, eps, 1, kCond, Integrator::heun) - x0), 1e-12);
  }
  const Tensor x0 = random_tensor(rng), eps = random_tensor(rng);
  const ConstantField f(x0 - eps);
  const Tensor s10 = sample_ode(f, eps, 10, kCond), s1000 = sample_ode(f, eps, 1000, kCond);
  EXPECT_LE(max_abs(s10 - s1000), 1e-12);
  EXPECT_LE(max_abs(s1000 - x0), 1e-12);
}

TEST(SampleOde, LinearDecayMatchesExponential) {
  std::mt19937_64 rng(7);
  const Tensor eps = random_tensor(rng);
  const LinearField decay(-1.0);
  const double expected = std::exp(-1.0) * eps.norm();
  EXPECT_NEAR(sample_ode(decay, eps, 1000, kCond).norm() / expected, 1.0, 0.02);
  EXPECT_NEAR(sample_ode(decay, eps, 1000, kCond, Integrator::heun).norm() / expected, 1.0, 1e-6);
  // One Euler step of -x from t=0 collapses to zero.
  EXPECT_LE(max_abs(sample_ode(decay, eps, 1, kCond)), 0.0);
}

TEST(SampleOde, Errors) {
  const ConstantField f(Tensor::Zero(2, 2));
  EXPECT_THROW(sample_ode(f, Tensor::Zero(2, 2), 0, kCond), InvalidArgument);
  Tensor bad = Tensor::Zero(2, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(sample_ode(f, bad, 4, kCond), InvalidArgument);
  EXPECT_THROW(sample_ode(f, Tensor::Zero(3, 2), 4, kCond), InvalidArgument);
}

TEST(SampleOde, TowardTargetLandsOnConditionTarget) {
  std::mt19937_64 rng(8);
  const TowardTargetField f;
  const Tensor eps = random_tensor(rng, 10, 3);
  const Tensor mu = condition_target(kCond, 10, 3);
  for (int steps : {1, 5, 50}) EXPECT_LE(max_abs(sample_ode(f, eps, steps, kCond) - mu), 1e-9) << steps;
  EXPECT_NE(condition_target(Condition{"other", "", {}}, 10, 3), mu);
}

TEST(Branch, SelectionRule) {
  EXPECT_EQ(select_branch(0.9, 0.5), Branch::m2m);
  EXPECT_EQ(select_branch(0.1, 0.5), Branch::t2m);
  EXPECT_EQ(select_branch(0.5, 0.5), Branch::m2m);
  EXPECT_THROW(select_branch(1.2, 0.5), InvalidArgument);
  EXPECT_THROW(select_branch(0.5, -0.1), InvalidArgument);
}

TEST(Branch, SelectionIsMonotone) {
  for (double tau = 0.0; tau <= 1.0; tau += 0.05) {
    bool seen_m2m = false;
    for (double s = 0.0; s <= 1.0; s += 0.001) {
      const bool m2m = select_branch(std::min(s, 1.0), tau) == Branch::m2m;
      if (seen_m2m) {
        EXPECT_TRUE(m2m) << "tau " << tau << " score " << s;
      }
      seen_m2m = seen_m2m || m2m;
    }
  }
}

TEST(Branch, TrainingDrawFrequencies) {
  constexpr std::uint64_t kDraws = 100000;
  std::uint64_t curated_t2m = 0, other_m2m = 0;
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    curated_t2m += draw_training_branch(DataKind::curated, 42, i) == Branch::t2m;
    other_m2m += draw_training_branch(DataKind::other, 42, i) == Branch::m2m;
  }
  const double f_curated = static_cast<double>(curated_t2m) / kDraws;
  const double f_other = static_cast<double>(other_m2m) / kDraws;
  EXPECT_GE(f_curated, 0.79);
  EXPECT_LE(f_curated, 0.81);
  EXPECT_GE(f_other, 0.59);
  EXPECT_LE(f_other, 0.61);
}

TEST(Branch, DrawIsDeterministicAndValidated) {
  for (std::uint64_t c = 0; c < 50; ++c) {
    EXPECT_EQ(draw_training_branch(DataKind::curated, 9, c), draw_training_branch(DataKind::curated, 9, c));
  }
  EXPECT_NO_THROW(training_branch_probabilities(DataKind::other).validate());
  EXPECT_THROW((BranchProbabilities{0.7, 0.2}.validate()), InvalidArgument);
  EXPECT_THROW((BranchProbabilities{1.2, -0.2}.validate()), InvalidArgument);
  EXPECT_EQ(draw_training_branch(BranchProbabilities{1.0, 0.0}, 1, 2), Branch::t2m);
  EXPECT_EQ(draw_training_branch(BranchProbabilities{0.0, 1.0}, 1, 2), Branch::m2m);
  EXPECT_THROW(parse_data_kind("mocap_only"), InvalidArgument);
}

TEST(TensorIo, LittleEndianRowMajor) {
  Tensor x(2, 2);
  x << 1.0, -2.0, 0.5, 3.0;
  const std::string bytes = tensor_to_f32_bytes(x);
  ASSERT_EQ(bytes.size(), 16u);
  // 1.0f = 0x3f800000, -2.0f = 0xc0000000.
  EXPECT_EQ(bytes.substr(0, 4), std::string("\x00\x00\x80\x3f", 4));
  EXPECT_EQ(bytes.substr(4, 4), std::string("\x00\x00\x00\xc0", 4));
  EXPECT_EQ(tensor_from_f32_bytes(bytes, 2, 2), x);
  EXPECT_THROW(tensor_from_f32_bytes(bytes, 3, 2), ParseError);
}

TEST(SimulateReference, NoiseLevel) {
  std::mt19937_64 rng(9);
  const Tensor x0 = random_tensor(rng, 300, 100);
  EXPECT_EQ(simulate_reference(x0, 0.0, 1), x0);
  const Tensor d = simulate_reference(x0, 0.1, 1) - x0;
  const double rms = std::sqrt(d.squaredNorm() / static_cast<double>(d.size()));
  EXPECT_NEAR(rms, 0.1, 0.002);
  EXPECT_EQ(simulate_reference(x0, 0.1, 1), simulate_reference(x0, 0.1, 1));
  EXPECT_THROW(simulate_reference(x0, -1.0, 1), InvalidArgument);
}

TEST(Distill, DeterministicBytesAndDuplicateIds) {
  const TowardTargetField field;
  const Teacher teacher = ode_teacher(field, 8);
  const std::vector<Condition> prompts = {{"walk", "walk forward", {}}, {"jump", "jump", {}}, {"walk", "walk forward", {}}};
  DistillOptions opt{.frames = 12, .features = 4, .seed = 3};
  const auto a = distill_dataset(teacher, prompts, opt);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].condition.id, "walk");
  EXPECT_EQ(a[1].condition.id, "jump");
  EXPECT_EQ(*a[0].motion, *a[2].motion);
  EXPECT_NE(*a[0].motion, *a[1].motion);

  TempDir d1("distill1"), d2("distill2");
  write_distilled(d1.path(), a, opt);
  opt.jobs = 4;
  write_distilled(d2.path(), distill_dataset(teacher, prompts, opt), opt);
  EXPECT_EQ(slurp(d1.path() / "dataset.jsonl"), slurp(d2.path() / "dataset.jsonl"));
  for (const char* f : {"tensors/00000.f32", "tensors/00001.f32", "tensors/00002.f32"}) {
    EXPECT_EQ(slurp(d1.path() / f), slurp(d2.path() / f)) << f;
  }
  const auto rows = parse_jsonl(slurp(d1.path() / "dataset.jsonl"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1]["prompt_id"], "jump");
  EXPECT_EQ(rows[1]["shape"], json::array({12, 4}));
  EXPECT_EQ(rows[1]["weight"], 2.0);
  const Tensor back = read_tensor_f32(d1 / rows[1]["data_path"].get<std::string>(), 12, 4);
  EXPECT_LE(max_abs(back - *a[1].motion), 1e-6);
}

TEST(Distill, OracleStudentHasZeroLossOnDistilledPairs) {
  const TowardTargetField field;
  const std::vector<Condition> prompts = {{"a", "", {}}, {"b", "", {}}, {"c", "", {}}};
  const DistillOptions opt{.frames = 9, .features = 3, .seed = 11};
  const auto samples = distill_dataset(ode_teacher(field, 1), prompts, opt);
  for (const auto& s : samples) {
    const Tensor eps = gaussian_noise(opt.frames, opt.features, prompt_noise_seed(s.condition, opt.seed));
    for (double t : {0.0, 0.25, 0.5, 0.9}) EXPECT_LE(fm_loss(field, *s.motion, eps, t, s.condition), 1e-20);
  }
}

TEST(Distill, TeacherFailureIsFlaggedAndRunContinues) {
  const Teacher flaky = [](const Condition& c, const Tensor& eps) -> Tensor {
    if (c.id == "bad") throw std::runtime_error("teacher exploded");
    if (c.id == "nan") return Tensor::Constant(eps.rows(), eps.cols(), std::nan(""));
    return eps;
  };
  const DistillOptions opt{.frames = 2, .features = 2};
  const auto out = distill_dataset(flaky, {{"ok", "", {}}, {"bad", "", {}}, {"nan", "", {}}, {"ok2", "", {}}}, opt);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_TRUE(out[0].ok());
  EXPECT_FALSE(out[1].ok());
  EXPECT_EQ(*out[1].failure, "teacher exploded");
  EXPECT_FALSE(out[2].ok());
  EXPECT_TRUE(out[3].ok());
  TempDir dir("flaky");
  const auto rows = write_distilled(dir.path(), out, opt);
  EXPECT_EQ(rows[1]["status"], "failed");
  EXPECT_TRUE(rows[1]["data_path"].is_null());
  EXPECT_THROW(distill_dataset(flaky, {}, opt), InvalidArgument);
}
