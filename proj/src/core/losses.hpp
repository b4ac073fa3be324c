// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <optional>

#include "core/network.hpp"
#include "core/pde.hpp"
#include "core/sampling.hpp"

namespace hardpinn {

struct LossReport {
  double value = 0.0;
  std::optional<Eigen::VectorXd> gradient;
};

/// Labeled observations packed for batched evaluation.
struct DataBatch {
  Eigen::Matrix2Xd inputs;
  Eigen::VectorXd targets;

  int size() const { return static_cast<int>(targets.size()); }
  static DataBatch from(const LabeledSet& set);
};

/// Evaluates losses and constraint residuals of one network on one problem.
/// Residual order is fixed: PDE block, then BC block (u(0,t) - u(2pi,t)),
/// then IC block (u(x,0) - g(x)).
class ModelEval {
 public:
  ModelEval(MLPArchitecture arch, PDEProblem problem)
      : arch_(arch), problem_(problem) {}

  const MLPArchitecture& arch() const { return arch_; }
  const PDEProblem& problem() const { return problem_; }

  /// c(theta), values only.
  Eigen::VectorXd residuals(const ParameterVector& theta, const CollocationSet& colloc);

  /// c(theta) and its Jacobian, one reverse tape sweep per constraint row.
  void residuals_and_jacobian(const ParameterVector& theta, const CollocationSet& colloc,
                              Eigen::VectorXd& c, Eigen::MatrixXd& jac);

  /// Sets grad to d(w . c(theta))/d(theta) and returns c, one batched
  /// backward pass per point role.
  Eigen::VectorXd weighted_residual_grad(const ParameterVector& theta, const CollocationSet& colloc,
                                         const Eigen::VectorXd& w, Eigen::VectorXd& grad);

  /// ||c(theta)||^2 and its gradient from one forward/backward pair.
  double residual_sq_grad(const ParameterVector& theta, const CollocationSet& colloc,
                          Eigen::VectorXd& grad);

  /// lambda . c + mu ||c||^2 (lambda may be empty), gradient accumulated into
  /// *grad_accum when non-null; one forward/backward pair.
  double penalty_terms(const ParameterVector& theta, const CollocationSet& colloc, double mu,
                       const Eigen::VectorXd& lambda, Eigen::VectorXd* grad_accum);

  /// (1/N) sum (u_i - u_theta(x_i, t_i))^2.
  LossReport empirical_loss(const ParameterVector& theta, const DataBatch& data, bool want_gradient);

  /// l(theta) + mu ||c(theta)||^2.
  LossReport soft_loss(const ParameterVector& theta, const DataBatch& data,
                       const CollocationSet& colloc, double mu, bool want_gradient);

  /// l(theta) + lambda . c(theta) + mu ||c(theta)||^2.
  LossReport augmented_lagrangian(const ParameterVector& theta, const Eigen::VectorXd& lambda,
                                  const DataBatch& data, const CollocationSet& colloc, double mu,
                                  bool want_gradient);

  /// l(theta) + mu ||c(theta)|| (not squared).
  double merit(const ParameterVector& theta, const DataBatch& data, const CollocationSet& colloc,
               double mu);

 private:
  struct CollocForward {
    JetBatch pde;
    ValueBatch bc_left, bc_right, ic;
    Eigen::VectorXd c;
  };

  void colloc_forward(const ParameterVector& theta, const CollocationSet& colloc, CollocForward& fw);
  void colloc_backward(const ParameterVector& theta, const CollocationSet& colloc,
                       const CollocForward& fw, const Eigen::VectorXd& seeds, Eigen::VectorXd& grad);

  MLPArchitecture arch_;
  PDEProblem problem_;
  ad::Tape tape_;
  CollocForward colloc_work_;
  ValueBatch data_work_;
};

/// Decrease of the local merit model q_mu between 0 and `step`:
///   -(grad_l . step + step . H step / 2) + mu (||c|| - ||c + J step||).
double predicted_reduction(const Eigen::VectorXd& step, const Eigen::VectorXd& grad_l,
                           const Eigen::MatrixXd& hess, const Eigen::VectorXd& c,
                           const Eigen::MatrixXd& jac, double mu);

}  // namespace hardpinn
