// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <functional>

namespace hardpinn {

/// Returns the objective value; fills `grad` when non-null. Value-only calls
/// come from the line search.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

/// Termination tolerances shared by all unconstrained subproblem solves:
/// stop when the gradient inf-norm falls below g_tol, the step falls below
/// f_tol, or l_max iterations are reached.
struct StopCriterion {
  double g_tol = 1e-9;
  double f_tol = 1e-9;
  int l_max = 20000;
};

enum class LbfgsStatus { GradientTol, StepTol, IterationLimit, Stalled };

const char* lbfgs_status_name(LbfgsStatus status);

struct LbfgsOptions {
  StopCriterion stop;
  int memory = 10;
  double armijo = 1e-4;          // sufficient-decrease constant
  double backtrack = 0.5;        // step shrink factor
  double min_step = 1e-20;       // line-search floor
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::IterationLimit;
};

/// Limited-memory BFGS with backtracking Armijo line search. On a line-search
/// failure (no acceptable step above the floor) the current iterate is
/// returned with status Stalled. A non-finite objective at x0 is an input
/// error.
LbfgsResult lbfgs_minimize(const Objective& fn, Eigen::VectorXd x0, const LbfgsOptions& options);

}  // namespace hardpinn
