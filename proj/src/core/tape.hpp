// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <vector>

namespace hardpinn::ad {

/// Handle to a recorded scalar on a Tape.
struct Var {
  std::uint32_t index = 0xffffffffu;
  bool valid() const { return index != 0xffffffffu; }
};

/// Scalar reverse-mode tape.
///
/// Slots [0, num_params) are leaves seeded from the parameter vector; every
/// recorded operation stores its value and the local partials with respect to
/// its (at most two) parents, so one backward sweep yields the exact gradient
/// of any recorded scalar with respect to all parameters.
class Tape {
 public:
  /// Rebinds the tape to a parameter vector, discarding prior recordings.
  void reset(const Eigen::VectorXd& params);

  Var param(int i) const { return Var{static_cast<std::uint32_t>(i)}; }

  Var constant(double v) { return push(v, kNone, 0.0, kNone, 0.0, Op::Constant); }
  Var add(Var a, Var b) { return push(val(a) + val(b), a.index, 1.0, b.index, 1.0, Op::Add); }
  Var sub(Var a, Var b) { return push(val(a) - val(b), a.index, 1.0, b.index, -1.0, Op::Sub); }
  Var mul(Var a, Var b) { return push(val(a) * val(b), a.index, val(b), b.index, val(a), Op::Mul); }
  Var neg(Var a) { return push(-val(a), a.index, -1.0, kNone, 0.0, Op::Neg); }
  /// k * a for a plain scalar k.
  Var scale(Var a, double k) { return push(k * val(a), a.index, k, kNone, 0.0, Op::Scale); }
  /// a + k for a plain scalar k.
  Var shift(Var a, double k) { return push(val(a) + k, a.index, 1.0, kNone, 0.0, Op::Shift); }
  Var square(Var a) { return push(val(a) * val(a), a.index, 2.0 * val(a), kNone, 0.0, Op::Square); }
  Var tanh(Var a) {
    const double t = std::tanh(val(a));
    return push(t, a.index, 1.0 - t * t, kNone, 0.0, Op::Tanh);
  }
  Var exp(Var a) {
    const double e = std::exp(val(a));
    return push(e, a.index, e, kNone, 0.0, Op::Exp);
  }

  double value(Var v) const { return values_[v.index]; }
  std::size_t size() const { return values_.size(); }
  std::size_t num_params() const { return num_params_; }

  /// d(root)/d(theta): one reverse sweep, writes into `grad` (resized to p).
  /// Throws NumericError naming the offending node if the recorded scalar is
  /// not finite.
  void gradient(Var root, Eigen::VectorXd& grad) const;

  /// Accumulates seed * d(root)/d(theta) into `grad` (must have length p).
  void accumulate_gradient(Var root, double seed, Eigen::VectorXd& grad) const;

 private:
  enum class Op : std::uint8_t {
    Leaf,
    Constant,
    Add,
    Sub,
    Mul,
    Neg,
    Scale,
    Shift,
    Square,
    Tanh,
    Exp,
  };

  static constexpr std::uint32_t kNone = 0xffffffffu;

  double val(Var v) const { return values_[v.index]; }
  Var push(double value, std::uint32_t a, double da, std::uint32_t b, double db, Op op);
  void sweep(Var root, double seed) const;
  [[noreturn]] void throw_nonfinite(Var root) const;
  static const char* op_name(Op op);

  std::vector<double> values_;
  std::vector<std::uint32_t> parent_a_, parent_b_;
  std::vector<double> partial_a_, partial_b_;
  std::vector<Op> ops_;
  std::size_t num_params_ = 0;
  mutable std::vector<double> adjoint_;
};

}  // namespace hardpinn::ad
