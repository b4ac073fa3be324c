// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/lbfgs.hpp"

#include <cmath>
#include <deque>

#include "core/errors.hpp"

namespace hardpinn {

using Eigen::VectorXd;

const char* lbfgs_status_name(LbfgsStatus status) {
  switch (status) {
    case LbfgsStatus::GradientTol: return "gradient_tol";
    case LbfgsStatus::StepTol: return "step_tol";
    case LbfgsStatus::IterationLimit: return "iteration_limit";
    case LbfgsStatus::Stalled: return "stalled";
  }
  return "?";
}

namespace {

struct Pair {
  VectorXd s, y;
  double rho;
};

// Two-loop recursion for the search direction -H g.
VectorXd two_loop(const std::deque<Pair>& mem, const VectorXd& grad) {
  VectorXd q = grad;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  if (!mem.empty()) {
    const Pair& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return -q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& fn, VectorXd x0, const LbfgsOptions& options) {
  LbfgsResult result;
  VectorXd grad(x0.size());
  double f = fn(x0, &grad);
  result.evaluations = 1;
  if (!std::isfinite(f)) throw NumericError("objective is not finite at the initial point");

  VectorXd x = std::move(x0);
  std::deque<Pair> memory;
  VectorXd x_new, grad_new(x.size());

  for (int l = 0; l < options.stop.l_max; ++l) {
    if (grad.lpNorm<Eigen::Infinity>() <= options.stop.g_tol) {
      result.status = LbfgsStatus::GradientTol;
      break;
    }

    VectorXd dir = two_loop(memory, grad);
    double slope = dir.dot(grad);
    if (!(slope < 0.0) || !dir.allFinite()) {
      // not a descent direction: fall back to steepest descent
      memory.clear();
      dir = -grad;
      slope = -grad.squaredNorm();
    }

    // backtracking Armijo
    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    while (step >= options.min_step) {
      x_new = x + step * dir;
      f_new = fn(x_new, nullptr);
      ++result.evaluations;
      if (std::isfinite(f_new) && f_new <= f + options.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= options.backtrack;
    }
    if (!accepted) {
      result.status = LbfgsStatus::Stalled;
      break;
    }

    fn(x_new, &grad_new);
    ++result.evaluations;
    ++result.iterations;

    VectorXd s = x_new - x;
    VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      memory.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }

    const double step_norm = (x_new - x).norm();
    x = std::move(x_new);
    f = f_new;
    grad = grad_new;
    if (step_norm <= options.stop.f_tol) {
      result.status = LbfgsStatus::StepTol;
      break;
    }
  }

  result.x = std::move(x);
  result.f = f;
  return result;
}

}  // namespace hardpinn
