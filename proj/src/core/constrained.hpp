// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include "core/losses.hpp"

namespace hardpinn {

/// min loss(theta)  s.t.  constraints(theta) = 0, as seen by the trainers.
/// Implementations must be deterministic in theta.
class ConstrainedProblem {
 public:
  virtual ~ConstrainedProblem() = default;

  virtual int dim() const = 0;
  virtual int num_constraints() const = 0;

  virtual double loss(const Eigen::VectorXd& theta) = 0;
  /// Returns the loss and fills grad (resized to dim()).
  virtual double loss_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) = 0;

  virtual void constraints(const Eigen::VectorXd& theta, Eigen::VectorXd& c) = 0;
  virtual void constraints_jacobian(const Eigen::VectorXd& theta, Eigen::VectorXd& c,
                                    Eigen::MatrixXd& jac) = 0;

  /// grad of w . c(theta); also returns c. Default goes through the Jacobian.
  virtual Eigen::VectorXd weighted_constraint_grad(const Eigen::VectorXd& theta,
                                                   const Eigen::VectorXd& w, Eigen::VectorXd& grad) {
    Eigen::VectorXd c;
    Eigen::MatrixXd jac;
    constraints_jacobian(theta, c, jac);
    grad = jac.transpose() * w;
    return c;
  }

  /// ||c(theta)||^2, with gradient 2 J^T c when requested.
  virtual double feasibility_sq(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
    Eigen::VectorXd c;
    if (grad == nullptr) {
      constraints(theta, c);
      return c.squaredNorm();
    }
    Eigen::MatrixXd jac;
    constraints_jacobian(theta, c, jac);
    *grad = 2.0 * (jac.transpose() * c);
    return c.squaredNorm();
  }

  /// lambda . c + mu ||c||^2 (lambda may be empty), with the gradient
  /// accumulated into *grad_accum when non-null.
  virtual double penalty_terms(const Eigen::VectorXd& theta, double mu,
                               const Eigen::VectorXd& lambda, Eigen::VectorXd* grad_accum) {
    Eigen::VectorXd c;
    constraints(theta, c);
    double value = mu * c.squaredNorm();
    if (lambda.size() > 0) value += lambda.dot(c);
    if (grad_accum != nullptr) {
      Eigen::VectorXd w = 2.0 * mu * c;
      if (lambda.size() > 0) w += lambda;
      Eigen::VectorXd grad_c;
      weighted_constraint_grad(theta, w, grad_c);
      *grad_accum += grad_c;
    }
    return value;
  }
};

/// PDE-learning instance: empirical loss on labeled data, collocation
/// residuals as equality constraints.
class PinnProblem final : public ConstrainedProblem {
 public:
  PinnProblem(const MLPArchitecture& arch, const PDEProblem& problem, const LabeledSet& data,
              CollocationSet colloc)
      : eval_(arch, problem), data_(DataBatch::from(data)), colloc_(std::move(colloc)) {}

  int dim() const override { return eval_.arch().param_count(); }
  int num_constraints() const override { return colloc_.total(); }

  double loss(const Eigen::VectorXd& theta) override {
    return eval_.empirical_loss(theta, data_, false).value;
  }

  double loss_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) override {
    LossReport report = eval_.empirical_loss(theta, data_, true);
    grad = std::move(*report.gradient);
    return report.value;
  }

  void constraints(const Eigen::VectorXd& theta, Eigen::VectorXd& c) override {
    c = eval_.residuals(theta, colloc_);
  }

  void constraints_jacobian(const Eigen::VectorXd& theta, Eigen::VectorXd& c,
                            Eigen::MatrixXd& jac) override {
    eval_.residuals_and_jacobian(theta, colloc_, c, jac);
  }

  Eigen::VectorXd weighted_constraint_grad(const Eigen::VectorXd& theta, const Eigen::VectorXd& w,
                                           Eigen::VectorXd& grad) override {
    return eval_.weighted_residual_grad(theta, colloc_, w, grad);
  }

  double feasibility_sq(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) override {
    if (grad == nullptr) return eval_.residuals(theta, colloc_).squaredNorm();
    return eval_.residual_sq_grad(theta, colloc_, *grad);
  }

  double penalty_terms(const Eigen::VectorXd& theta, double mu, const Eigen::VectorXd& lambda,
                       Eigen::VectorXd* grad_accum) override {
    return eval_.penalty_terms(theta, colloc_, mu, lambda, grad_accum);
  }

  ModelEval& eval() { return eval_; }
  const DataBatch& data() const { return data_; }
  const CollocationSet& colloc() const { return colloc_; }

 private:
  ModelEval eval_;
  DataBatch data_;
  CollocationSet colloc_;
};

}  // namespace hardpinn
