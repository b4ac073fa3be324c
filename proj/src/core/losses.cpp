// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/losses.hpp"

#include "core/errors.hpp"

namespace hardpinn {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

DataBatch DataBatch::from(const LabeledSet& set) {
  DataBatch batch;
  const int n = set.size();
  batch.inputs.resize(2, n);
  batch.targets.resize(n);
  for (int i = 0; i < n; ++i) {
    batch.inputs(0, i) = set.points[static_cast<std::size_t>(i)].x;
    batch.inputs(1, i) = set.points[static_cast<std::size_t>(i)].t;
    batch.targets[i] = set.points[static_cast<std::size_t>(i)].u;
  }
  return batch;
}

namespace {

// Partials of the PDE residual with respect to the jet components.
void residual_seeds(const PDEProblem& problem, double u, double& su, double& sux, double& sut,
                    double& suxx) {
  switch (problem.kind) {
    case PDEKind::Transport:
      su = 0.0;
      sux = problem.beta;
      sut = 1.0;
      suxx = 0.0;
      return;
    case PDEKind::Reaction:
      su = -problem.alpha * (1.0 - 2.0 * u);
      sux = 0.0;
      sut = 1.0;
      suxx = 0.0;
      return;
    case PDEKind::ReactionDiffusion:
      su = -problem.alpha * (1.0 - 2.0 * u);
      sux = 0.0;
      sut = 1.0;
      suxx = -problem.tau;
      return;
  }
}

Eigen::Matrix2Xd pde_inputs(const CollocationSet& colloc) {
  Eigen::Matrix2Xd xt(2, colloc.m_pde());
  for (int i = 0; i < colloc.m_pde(); ++i) {
    xt(0, i) = colloc.pde_points[static_cast<std::size_t>(i)].first;
    xt(1, i) = colloc.pde_points[static_cast<std::size_t>(i)].second;
  }
  return xt;
}

}  // namespace

void ModelEval::colloc_forward(const ParameterVector& theta, const CollocationSet& colloc,
                               CollocForward& fw) {
  fw.c.resize(colloc.total());
  int row = 0;
  if (colloc.m_pde() > 0) {
    forward_jets(arch_, theta, pde_inputs(colloc), fw.pde);
    for (int i = 0; i < colloc.m_pde(); ++i) {
      const Jet2 jet{fw.pde.out.u(0, i), fw.pde.out.ux(0, i), fw.pde.out.ut(0, i),
                     fw.pde.out.uxx(0, i)};
      fw.c[row++] = pde_residual(problem_, jet);
    }
  }
  if (colloc.m_bc() > 0) {
    Eigen::Matrix2Xd left(2, colloc.m_bc()), right(2, colloc.m_bc());
    for (int i = 0; i < colloc.m_bc(); ++i) {
      left(0, i) = 0.0;
      left(1, i) = colloc.bc_times[static_cast<std::size_t>(i)];
      right(0, i) = kTwoPi;
      right(1, i) = colloc.bc_times[static_cast<std::size_t>(i)];
    }
    forward_values(arch_, theta, left, fw.bc_left);
    forward_values(arch_, theta, right, fw.bc_right);
    for (int i = 0; i < colloc.m_bc(); ++i) fw.c[row++] = fw.bc_left.out[i] - fw.bc_right.out[i];
  }
  if (colloc.m_ic() > 0) {
    Eigen::Matrix2Xd pts(2, colloc.m_ic());
    for (int i = 0; i < colloc.m_ic(); ++i) {
      pts(0, i) = colloc.ic_xs[static_cast<std::size_t>(i)];
      pts(1, i) = 0.0;
    }
    forward_values(arch_, theta, pts, fw.ic);
    for (int i = 0; i < colloc.m_ic(); ++i) {
      fw.c[row++] = fw.ic.out[i] - problem_.initial_condition(colloc.ic_xs[static_cast<std::size_t>(i)]);
    }
  }
}

void ModelEval::colloc_backward(const ParameterVector& theta, const CollocationSet& colloc,
                                const CollocForward& fw, const VectorXd& seeds, VectorXd& grad) {
  int row = 0;
  if (colloc.m_pde() > 0) {
    JetChannels seed;
    const int n = colloc.m_pde();
    seed.u.resize(1, n);
    seed.ux.resize(1, n);
    seed.ut.resize(1, n);
    seed.uxx.resize(1, n);
    for (int i = 0; i < n; ++i) {
      double su, sux, sut, suxx;
      residual_seeds(problem_, fw.pde.out.u(0, i), su, sux, sut, suxx);
      seed.u(0, i) = seeds[row] * su;
      seed.ux(0, i) = seeds[row] * sux;
      seed.ut(0, i) = seeds[row] * sut;
      seed.uxx(0, i) = seeds[row] * suxx;
      ++row;
    }
    backward_jets(arch_, theta, fw.pde, seed, grad);
  }
  if (colloc.m_bc() > 0) {
    const int n = colloc.m_bc();
    RowVectorXd s = seeds.segment(row, n).transpose();
    backward_values(arch_, theta, fw.bc_left, s, grad);
    backward_values(arch_, theta, fw.bc_right, -s, grad);
    row += n;
  }
  if (colloc.m_ic() > 0) {
    const int n = colloc.m_ic();
    backward_values(arch_, theta, fw.ic, seeds.segment(row, n).transpose(), grad);
    row += n;
  }
}

VectorXd ModelEval::residuals(const ParameterVector& theta, const CollocationSet& colloc) {
  colloc_forward(theta, colloc, colloc_work_);
  return colloc_work_.c;
}

void ModelEval::residuals_and_jacobian(const ParameterVector& theta, const CollocationSet& colloc,
                                       VectorXd& c, MatrixXd& jac) {
  check_shape(arch_, theta);
  const int m = colloc.total();
  const int p = arch_.param_count();
  c.resize(m);
  jac.resize(m, p);
  VectorXd row_grad;
  int row = 0;
  for (const auto& [x, t] : colloc.pde_points) {
    tape_.reset(theta);
    const ad::JetVar jet = forward_jet_tape(tape_, arch_, x, t);
    const ad::Var r = pde_residual_tape(tape_, problem_, jet);
    tape_.gradient(r, row_grad);
    c[row] = tape_.value(r);
    jac.row(row) = row_grad.transpose();
    ++row;
  }
  for (double t : colloc.bc_times) {
    tape_.reset(theta);
    const ad::Var left = forward_value_tape(tape_, arch_, 0.0, t);
    const ad::Var right = forward_value_tape(tape_, arch_, kTwoPi, t);
    const ad::Var r = tape_.sub(left, right);
    tape_.gradient(r, row_grad);
    c[row] = tape_.value(r);
    jac.row(row) = row_grad.transpose();
    ++row;
  }
  for (double x : colloc.ic_xs) {
    tape_.reset(theta);
    const ad::Var u = forward_value_tape(tape_, arch_, x, 0.0);
    const ad::Var r = tape_.shift(u, -problem_.initial_condition(x));
    tape_.gradient(r, row_grad);
    c[row] = tape_.value(r);
    jac.row(row) = row_grad.transpose();
    ++row;
  }
}

VectorXd ModelEval::weighted_residual_grad(const ParameterVector& theta, const CollocationSet& colloc,
                                           const VectorXd& w, VectorXd& grad) {
  if (w.size() != colloc.total()) throw ConfigError("weight vector length does not match constraint count");
  colloc_forward(theta, colloc, colloc_work_);
  grad.setZero(arch_.param_count());
  colloc_backward(theta, colloc, colloc_work_, w, grad);
  return colloc_work_.c;
}

double ModelEval::residual_sq_grad(const ParameterVector& theta, const CollocationSet& colloc,
                                   VectorXd& grad) {
  colloc_forward(theta, colloc, colloc_work_);
  grad.setZero(arch_.param_count());
  colloc_backward(theta, colloc, colloc_work_, 2.0 * colloc_work_.c, grad);
  return colloc_work_.c.squaredNorm();
}

double ModelEval::penalty_terms(const ParameterVector& theta, const CollocationSet& colloc,
                                double mu, const VectorXd& lambda, VectorXd* grad_accum) {
  if (lambda.size() > 0 && lambda.size() != colloc.total()) {
    throw ConfigError("multiplier length does not match constraint count");
  }
  colloc_forward(theta, colloc, colloc_work_);
  const VectorXd& c = colloc_work_.c;
  double value = mu * c.squaredNorm();
  if (lambda.size() > 0) value += lambda.dot(c);
  if (grad_accum != nullptr) {
    VectorXd w = 2.0 * mu * c;
    if (lambda.size() > 0) w += lambda;
    colloc_backward(theta, colloc, colloc_work_, w, *grad_accum);
  }
  return value;
}

LossReport ModelEval::empirical_loss(const ParameterVector& theta, const DataBatch& data,
                                     bool want_gradient) {
  if (data.size() == 0) throw ConfigError("empirical loss needs a nonempty labeled set");
  forward_values(arch_, theta, data.inputs, data_work_);
  const RowVectorXd residual = data_work_.out - data.targets.transpose();
  LossReport report;
  report.value = residual.squaredNorm() / data.size();
  if (want_gradient) {
    VectorXd grad = VectorXd::Zero(arch_.param_count());
    backward_values(arch_, theta, data_work_, residual * (2.0 / data.size()), grad);
    report.gradient = std::move(grad);
  }
  return report;
}

LossReport ModelEval::soft_loss(const ParameterVector& theta, const DataBatch& data,
                                const CollocationSet& colloc, double mu, bool want_gradient) {
  LossReport report = empirical_loss(theta, data, want_gradient);
  if (colloc.total() == 0) return report;
  colloc_forward(theta, colloc, colloc_work_);
  report.value += mu * colloc_work_.c.squaredNorm();
  if (want_gradient) {
    colloc_backward(theta, colloc, colloc_work_, 2.0 * mu * colloc_work_.c, *report.gradient);
  }
  return report;
}

LossReport ModelEval::augmented_lagrangian(const ParameterVector& theta, const VectorXd& lambda,
                                           const DataBatch& data, const CollocationSet& colloc,
                                           double mu, bool want_gradient) {
  if (lambda.size() != colloc.total()) throw ConfigError("multiplier length does not match constraint count");
  LossReport report = empirical_loss(theta, data, want_gradient);
  if (colloc.total() == 0) return report;
  colloc_forward(theta, colloc, colloc_work_);
  const VectorXd& c = colloc_work_.c;
  report.value += lambda.dot(c) + mu * c.squaredNorm();
  if (want_gradient) {
    colloc_backward(theta, colloc, colloc_work_, lambda + 2.0 * mu * c, *report.gradient);
  }
  return report;
}

double ModelEval::merit(const ParameterVector& theta, const DataBatch& data,
                        const CollocationSet& colloc, double mu) {
  forward_values(arch_, theta, data.inputs, data_work_);
  const double loss = (data_work_.out - data.targets.transpose()).squaredNorm() / data.size();
  colloc_forward(theta, colloc, colloc_work_);
  return loss + mu * colloc_work_.c.norm();
}

double predicted_reduction(const VectorXd& step, const VectorXd& grad_l, const MatrixXd& hess,
                           const VectorXd& c, const MatrixXd& jac, double mu) {
  const double quad = grad_l.dot(step) + 0.5 * step.dot(hess * step);
  return -quad + mu * (c.norm() - (c + jac * step).norm());
}

}  // namespace hardpinn
