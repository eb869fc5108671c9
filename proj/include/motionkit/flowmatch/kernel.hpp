#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "motionkit/core/error.hpp"
#include "motionkit/util/hash.hpp"

namespace motionkit::flow {

// Motion tensor: N frames by D features.
using Tensor = Eigen::MatrixXd;

// Conditioning payload: a prompt id plus optional text and reference-motion
// handle. Identity (hashing, equality) is the id.
struct Condition {
  std::string id;
  std::string text;
  std::optional<std::string> reference_motion;

  std::uint64_t hash() const { return fnv1a64(id); }
  friend bool operator==(const Condition& a, const Condition& b) { return a.id == b.id; }
};

class VelocityField {
 public:
  virtual ~VelocityField() = default;
  virtual Tensor operator()(const Tensor& x, double t, const Condition& c) const = 0;
};

// Adapts any callable (x, t, c) -> Tensor.
class FunctionField : public VelocityField {
 public:
  explicit FunctionField(std::function<Tensor(const Tensor&, double, const Condition&)> fn) : fn_(std::move(fn)) {}
  Tensor operator()(const Tensor& x, double t, const Condition& c) const override { return fn_(x, t, c); }

 private:
  std::function<Tensor(const Tensor&, double, const Condition&)> fn_;
};

// v(x, t, c) = v regardless of inputs; with v = x0 - eps this is the exact
// field of a single straight path.
class ConstantField : public VelocityField {
 public:
  explicit ConstantField(Tensor v) : v_(std::move(v)) {}
  Tensor operator()(const Tensor& x, double, const Condition&) const override {
    if (x.rows() != v_.rows() || x.cols() != v_.cols()) throw InvalidArgument("constant field shape mismatch");
    return v_;
  }

 private:
  Tensor v_;
};

// v(x) = rate * x.
class LinearField : public VelocityField {
 public:
  explicit LinearField(double rate) : rate_(rate) {}
  Tensor operator()(const Tensor& x, double, const Condition&) const override { return rate_ * x; }

 private:
  double rate_;
};

namespace detail {

inline void check_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
}

inline void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("t must lie in [0, 1]");
}

inline void check_finite(const Tensor& x, const char* what) {
  if (!x.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entries");
}

}  // namespace detail

// x_t = (1 - t) eps + t x0.
inline Tensor interpolate(const Tensor& x0, const Tensor& eps, double t) {
  detail::check_same_shape(x0, eps, "interpolate");
  detail::check_time(t);
  return (1.0 - t) * eps + t * x0;
}

inline Tensor velocity_target(const Tensor& x0, const Tensor& eps) {
  detail::check_same_shape(x0, eps, "velocity_target");
  return x0 - eps;
}

// Mean over elements of (field(x_t, t, c) - (x0 - eps))^2.
inline double fm_loss(const VelocityField& field, const Tensor& x0, const Tensor& eps, double t, const Condition& c) {
  const Tensor xt = interpolate(x0, eps, t);
  const Tensor pred = field(xt, t, c);
  detail::check_same_shape(pred, x0, "fm_loss field output");
  if (x0.size() == 0) throw InvalidArgument("fm_loss of an empty tensor");
  return (pred - velocity_target(x0, eps)).squaredNorm() / static_cast<double>(x0.size());
}

enum class Integrator { euler, heun };

inline std::string integrator_name(Integrator i) { return i == Integrator::euler ? "euler" : "heun"; }

inline Integrator parse_integrator(const std::string& s) {
  if (s == "euler") return Integrator::euler;
  if (s == "heun") return Integrator::heun;
  throw InvalidArgument("unknown integrator '" + s + "'");
}

// Integrates dx/dt = field(x, t, c) from t = 0 (x = eps) to t = 1 in
// `steps` uniform steps.
inline Tensor sample_ode(const VelocityField& field, const Tensor& eps, int steps, const Condition& c,
                         Integrator integrator = Integrator::euler) {
  if (steps < 1) throw InvalidArgument("sample_ode needs steps >= 1");
  detail::check_finite(eps, "sample_ode");
  const double h = 1.0 / steps;
  Tensor x = eps;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Tensor v = field(x, t, c);
    detail::check_same_shape(v, x, "sample_ode field output");
    if (integrator == Integrator::euler) {
      x += h * v;
    } else {
      const Tensor pred = x + h * v;
      x += 0.5 * h * (v + field(pred, (k + 1) * h, c));
    }
  }
  return x;
}

}  // namespace motionkit::flow
