// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

#include "core/constrained.hpp"

namespace hardpinn {

enum class HessianScheme { DampedBfgs, Sr1, Identity };

const char* hessian_scheme_name(HessianScheme scheme);
HessianScheme hessian_scheme_from_name(const std::string& name);

struct TrSqpConfig {
  double damping = 0.2;          // damped BFGS blending threshold
  double normal_fraction = 0.8;  // fraction of the radius spent on feasibility
  double eta_low = 1e-8;
  double eta_upp = 0.3;
  double radius_factor = 2.0;    // radius grows/shrinks by this factor
  double initial_radius = 1.0;
  double initial_mu = 1.0;
  int k_max = 20000;
  double g_tol = 1e-9;
  double f_tol = 1e-9;
  HessianScheme hessian = HessianScheme::Sr1;
  double sr1_skip_tol = 1e-8;
  double pcg_tol = 1e-10;           // relative residual for the tangential solve
  bool validate_invariants = false; // per-iteration symmetry/PD/radius checks
};

struct TrSqpRecord {
  int k = 0;
  bool accepted = false;
  double eta = 0.0;
  double radius = 0.0;  // radius used for this step
  double mu = 0.0;
  double loss = 0.0;    // at the iterate before the step
  double c_norm = 0.0;
  double merit = 0.0;
  double step_norm = 0.0;
  double normal_norm = 0.0;
  double pred = 0.0;
  double ared = 0.0;
  double hess_asymmetry = 0.0;
  double wall_s = 0.0;
  const char* scheme = "";
  const Eigen::VectorXd* theta = nullptr;  // iterate after the update
};

using TrSqpObserver = std::function<void(const TrSqpRecord&)>;

enum class TrSqpTermination { StepTol, GradientTol, IterationLimit };

const char* trsqp_termination_name(TrSqpTermination reason);

struct TrSqpResult {
  Eigen::VectorXd theta;
  Eigen::VectorXd lambda;
  int iterations = 0;
  int accepted_steps = 0;
  TrSqpTermination reason = TrSqpTermination::IterationLimit;
  double final_loss = 0.0;
  double final_c_norm = 0.0;
};

// --- building blocks ---------------------------------------------------------

/// Regularizer for the constraint normal equations J J^T + eps I:
/// eps = 1e-10 trace(J J^T) / rows.
double normal_eq_epsilon(const Eigen::MatrixXd& jac);

/// Damped BFGS update of a positive definite H from the pair (s, y). The
/// curvature target s.r >= damping * s.Hs is enforced by blending y with Hs,
/// so positive definiteness is preserved.
void damped_bfgs_update(Eigen::MatrixXd& hess, const Eigen::VectorXd& s, const Eigen::VectorXd& y,
                        double damping);

/// Symmetric rank-one update; skipped when |(y - Hs).s| is below
/// skip_tol ||y - Hs|| ||s||.
void sr1_update(Eigen::MatrixXd& hess, const Eigen::VectorXd& s, const Eigen::VectorXd& y,
                double skip_tol);

/// Dogleg step for min ||c + J d||^2 s.t. ||d|| <= radius, between the
/// regularized Gauss-Newton minimum-norm step and the Cauchy step.
Eigen::VectorXd normal_step(const Eigen::VectorXd& c, const Eigen::MatrixXd& jac, double radius);

/// Projected (Steihaug-Toint) conjugate gradient for
///   min grad_l . d + d . H d / 2   s.t.  J d = J normal,  ||d|| <= radius,
/// started at `normal` and iterating in the null space of J.
Eigen::VectorXd tangential_step(const Eigen::VectorXd& grad_l, const Eigen::MatrixXd& hess,
                                const Eigen::MatrixXd& jac, const Eigen::VectorXd& normal,
                                double radius, double tol = 1e-10, int max_iterations = -1);

/// Least-squares multipliers argmin ||grad_l + J^T lambda|| via the
/// regularized normal equations.
Eigen::VectorXd least_squares_multipliers(const Eigen::VectorXd& grad_l, const Eigen::MatrixXd& jac);

/// Penalty update: keeps mu unless the step's feasibility gain demands more,
/// mu = max(mu_prev, (grad_l . step + step . H step / 2) / (0.7 gain)).
double adaptive_penalty(double mu_prev, const Eigen::VectorXd& grad_l, const Eigen::MatrixXd& hess,
                        const Eigen::VectorXd& step, const Eigen::VectorXd& c,
                        const Eigen::MatrixXd& jac);

/// Trust-region SQP trainer.
TrSqpResult trsqp_train(ConstrainedProblem& problem, const Eigen::VectorXd& theta0,
                        const TrSqpConfig& config, const TrSqpObserver& observer = {});

}  // namespace hardpinn
