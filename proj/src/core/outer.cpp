// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/outer.hpp"

#include <chrono>
#include <cmath>

#include "core/errors.hpp"

namespace hardpinn {

using Eigen::VectorXd;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const VectorXd kNoMultipliers;

}  // namespace

LbfgsResult pretrain(ConstrainedProblem& problem, const VectorXd& theta0,
                     const LbfgsOptions& options) {
  if (problem.num_constraints() == 0) {
    throw ConfigError("pretraining needs a nonempty collocation set");
  }
  Objective fn = [&problem](const VectorXd& th, VectorXd* grad) {
    return problem.feasibility_sq(th, grad);
  };
  return lbfgs_minimize(fn, theta0, options);
}

LbfgsResult pinn_train(ConstrainedProblem& problem, double mu, const VectorXd& theta0,
                       const LbfgsOptions& options) {
  Objective fn = [&](const VectorXd& th, VectorXd* grad) {
    double value = grad ? problem.loss_grad(th, *grad) : problem.loss(th);
    if (mu != 0.0 && problem.num_constraints() > 0) {
      value += problem.penalty_terms(th, mu, kNoMultipliers, grad);
    }
    return value;
  };
  return lbfgs_minimize(fn, theta0, options);
}

namespace {

OuterResult run_outer_loop(ConstrainedProblem& problem, const VectorXd& theta0,
                           const OuterLoopConfig& outer, const LbfgsOptions& inner,
                           const OuterLogger& log, bool with_multipliers) {
  OuterResult result;
  result.theta = theta0;
  result.lambda = VectorXd::Zero(with_multipliers ? problem.num_constraints() : 0);

  const double mu_max = outer.mu0 * std::pow(outer.rho, outer.mu_max_exponent);
  VectorXd c;
  int k = 0;
  while (true) {
    const double mu = outer.mu0 * std::pow(outer.rho, k);
    if (mu >= mu_max) break;
    const auto t0 = std::chrono::steady_clock::now();

    Objective fn = [&](const VectorXd& th, VectorXd* grad) {
      double value = grad ? problem.loss_grad(th, *grad) : problem.loss(th);
      value += problem.penalty_terms(th, mu, with_multipliers ? result.lambda : kNoMultipliers, grad);
      return value;
    };

    LbfgsResult sub = lbfgs_minimize(fn, result.theta, inner);
    result.theta = std::move(sub.x);
    result.inner_iterations_total += sub.iterations;

    problem.constraints(result.theta, c);
    if (with_multipliers) result.lambda += mu * c;

    if (log) {
      OuterRecord record;
      record.k = k;
      record.mu = mu;
      record.inner_iterations = sub.iterations;
      record.loss = problem.loss(result.theta);
      record.c_norm = c.norm();
      record.merit = record.loss + mu * record.c_norm;
      record.wall_s = seconds_since(t0);
      log(record);
    }
    ++k;
  }
  result.outer_iterations = k;
  return result;
}

}  // namespace

OuterResult penalty_train(ConstrainedProblem& problem, const VectorXd& theta0,
                          const OuterLoopConfig& outer, const LbfgsOptions& inner,
                          const OuterLogger& log) {
  return run_outer_loop(problem, theta0, outer, inner, log, false);
}

OuterResult alm_train(ConstrainedProblem& problem, const VectorXd& theta0,
                      const OuterLoopConfig& outer, const LbfgsOptions& inner,
                      const OuterLogger& log) {
  return run_outer_loop(problem, theta0, outer, inner, log, true);
}

}  // namespace hardpinn
