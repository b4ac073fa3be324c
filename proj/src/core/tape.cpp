// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/tape.hpp"

#include <sstream>

#include "core/errors.hpp"

namespace hardpinn::ad {

void Tape::reset(const Eigen::VectorXd& params) {
  num_params_ = static_cast<std::size_t>(params.size());
  values_.assign(params.data(), params.data() + params.size());
  parent_a_.assign(num_params_, kNone);
  parent_b_.assign(num_params_, kNone);
  partial_a_.assign(num_params_, 0.0);
  partial_b_.assign(num_params_, 0.0);
  ops_.assign(num_params_, Op::Leaf);
}

Var Tape::push(double value, std::uint32_t a, double da, std::uint32_t b, double db, Op op) {
  const auto idx = static_cast<std::uint32_t>(values_.size());
  values_.push_back(value);
  parent_a_.push_back(a);
  parent_b_.push_back(b);
  partial_a_.push_back(da);
  partial_b_.push_back(db);
  ops_.push_back(op);
  return Var{idx};
}

void Tape::sweep(Var root, double seed) const {
  if (!std::isfinite(values_[root.index])) throw_nonfinite(root);
  const std::size_t n = values_.size();
  if (adjoint_.size() < n) adjoint_.resize(n);
  // zero the sweep range plus the leaf block the caller will read back
  const std::size_t clear_to = std::max<std::size_t>(root.index + 1, num_params_);
  std::fill(adjoint_.begin(), adjoint_.begin() + static_cast<std::ptrdiff_t>(clear_to), 0.0);
  adjoint_[root.index] = seed;
  for (std::size_t i = root.index; i >= num_params_; --i) {
    const double a = adjoint_[i];
    if (a == 0.0) continue;
    if (parent_a_[i] != kNone) adjoint_[parent_a_[i]] += partial_a_[i] * a;
    if (parent_b_[i] != kNone) adjoint_[parent_b_[i]] += partial_b_[i] * a;
    if (i == 0) break;
  }
}

void Tape::gradient(Var root, Eigen::VectorXd& grad) const {
  sweep(root, 1.0);
  grad.resize(static_cast<Eigen::Index>(num_params_));
  for (std::size_t i = 0; i < num_params_; ++i) grad[static_cast<Eigen::Index>(i)] = adjoint_[i];
}

void Tape::accumulate_gradient(Var root, double seed, Eigen::VectorXd& grad) const {
  sweep(root, seed);
  for (std::size_t i = 0; i < num_params_; ++i) grad[static_cast<Eigen::Index>(i)] += adjoint_[i];
}

void Tape::throw_nonfinite(Var root) const {
  // Name the first non-finite node so the failure is attributable.
  for (std::size_t i = 0; i <= root.index; ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream msg;
      msg << "numeric overflow on tape: node " << i << " (" << op_name(ops_[i])
          << ") has value " << values_[i];
      throw NumericError(msg.str());
    }
  }
  throw NumericError("numeric overflow on tape: root value is not finite");
}

const char* Tape::op_name(Op op) {
  switch (op) {
    case Op::Leaf: return "leaf";
    case Op::Constant: return "constant";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Neg: return "neg";
    case Op::Scale: return "scale";
    case Op::Shift: return "shift";
    case Op::Square: return "square";
    case Op::Tanh: return "tanh";
    case Op::Exp: return "exp";
  }
  return "?";
}

}  // namespace hardpinn::ad
