// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <functional>

#include "core/constrained.hpp"
#include "core/lbfgs.hpp"

namespace hardpinn {

/// Penalty schedule shared by the penalty and augmented Lagrangian loops:
/// mu_k = mu0 * rho^k, stopping once mu_k >= mu0 * rho^mu_max_exponent
/// (exactly mu_max_exponent subproblem solves at the defaults).
struct OuterLoopConfig {
  double mu0 = 1.0;
  double rho = 1.1;
  int mu_max_exponent = 100;
};

struct OuterRecord {
  int k = 0;
  double mu = 0.0;
  int inner_iterations = 0;
  double loss = 0.0;
  double c_norm = 0.0;
  double merit = 0.0;  // loss + mu * ||c||
  double wall_s = 0.0;
};

using OuterLogger = std::function<void(const OuterRecord&)>;

struct OuterResult {
  Eigen::VectorXd theta;
  Eigen::VectorXd lambda;  // empty for the penalty method
  int outer_iterations = 0;
  int inner_iterations_total = 0;
};

/// theta_init = argmin ||c(theta)||^2 from theta0 (L-BFGS).
LbfgsResult pretrain(ConstrainedProblem& problem, const Eigen::VectorXd& theta0,
                     const LbfgsOptions& options);

/// Single L-BFGS run on loss + mu ||c||^2 with a fixed penalty coefficient.
LbfgsResult pinn_train(ConstrainedProblem& problem, double mu, const Eigen::VectorXd& theta0,
                       const LbfgsOptions& options);

/// Warm-started subproblem loop on loss + mu_k ||c||^2 with mu_k = mu0 rho^k.
OuterResult penalty_train(ConstrainedProblem& problem, const Eigen::VectorXd& theta0,
                          const OuterLoopConfig& outer, const LbfgsOptions& inner,
                          const OuterLogger& log = {});

/// Augmented Lagrangian loop on loss + lambda . c + mu_k ||c||^2; multipliers
/// take the first-order update lambda += mu_k c at the fresh iterate.
OuterResult alm_train(ConstrainedProblem& problem, const Eigen::VectorXd& theta0,
                      const OuterLoopConfig& outer, const LbfgsOptions& inner,
                      const OuterLogger& log = {});

}  // namespace hardpinn
