// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>

#include "core/errors.hpp"
#include "core/losses.hpp"
#include "doctest.h"
#include "support/test_utils.hpp"

using namespace hardpinn;
using hardpinn::testing::close;
using hardpinn::testing::fd_gradient;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

LabeledSet make_labeled(Rng& rng, const MLPArchitecture& arch, const VectorXd& theta, int n,
                        bool exact_fit) {
  LabeledSet set;
  for (int i = 0; i < n; ++i) {
    LabeledPoint p;
    p.x = rng.uniform(0.0, kTwoPi);
    p.t = rng.uniform(0.0, 1.0);
    p.u = exact_fit ? forward_value(arch, theta, p.x, p.t) : rng.normal();
    set.points.push_back(p);
  }
  return set;
}

CollocationSet make_colloc(Rng& rng, int pde, int bc, int ic) {
  CollocationSet colloc;
  for (int i = 0; i < pde; ++i) {
    colloc.pde_points.emplace_back(rng.uniform(0.0, kTwoPi), rng.uniform(0.0, 1.0));
  }
  for (int i = 0; i < bc; ++i) colloc.bc_times.push_back(rng.uniform(0.0, 1.0));
  for (int i = 0; i < ic; ++i) colloc.ic_xs.push_back(rng.uniform(0.0, kTwoPi));
  return colloc;
}

}  // namespace

TEST_CASE("empirical loss") {
  Rng rng(17);
  const MLPArchitecture arch{2, 4};
  const PDEProblem problem{PDEKind::Transport, 2.0, 0.0, 0.0, 2.0};
  ModelEval eval(arch, problem);

  SUBCASE("exact fit gives zero") {
    const VectorXd theta = testing::random_params(arch, rng);
    DataBatch data = DataBatch::from(make_labeled(rng, arch, theta, 20, true));
    ValueBatch batch;
    forward_values(arch, theta, data.inputs, batch);
    data.targets = batch.out.transpose();  // targets along the evaluation path
    CHECK(eval.empirical_loss(theta, data, false).value == 0.0);
  }

  SUBCASE("one point, zero network, target 2: loss 4") {
    const VectorXd theta = VectorXd::Zero(arch.param_count());
    LabeledSet set;
    set.points.push_back({1.0, 0.5, 2.0});
    CHECK(eval.empirical_loss(theta, DataBatch::from(set), false).value == 4.0);
  }

  SUBCASE("gradient matches finite differences") {
    const VectorXd theta = testing::random_params(arch, rng);
    const DataBatch data = DataBatch::from(make_labeled(rng, arch, theta, 7, false));
    LossReport report = eval.empirical_loss(theta, data, true);
    REQUIRE(report.gradient.has_value());
    const VectorXd fd = fd_gradient(
        [&](const VectorXd& th) { return eval.empirical_loss(th, data, false).value; }, theta);
    for (Eigen::Index i = 0; i < fd.size(); ++i) CHECK(close((*report.gradient)[i], fd[i], 1e-5));
  }

  SUBCASE("empty data is a configuration error") {
    const VectorXd theta = VectorXd::Zero(arch.param_count());
    CHECK_THROWS_AS(eval.empirical_loss(theta, DataBatch::from(LabeledSet{}), false), ConfigError);
  }
}

TEST_CASE("soft loss") {
  Rng rng(31);
  const MLPArchitecture arch{2, 4};
  const PDEProblem problem{PDEKind::Transport, 2.0, 0.0, 0.0, 2.0};
  ModelEval eval(arch, problem);

  SUBCASE("vanishing constraints reduce it to the empirical loss") {
    // zero network on transport: PDE and BC residuals are identically zero
    const VectorXd theta = VectorXd::Zero(arch.param_count());
    const DataBatch data = DataBatch::from(make_labeled(rng, arch, theta, 5, false));
    CollocationSet colloc = make_colloc(rng, 3, 2, 0);
    const double ell = eval.empirical_loss(theta, data, false).value;
    CHECK(eval.soft_loss(theta, data, colloc, 10.0, false).value == ell);
  }

  SUBCASE("mu = 0 reduces it to the empirical loss") {
    const VectorXd theta = testing::random_params(arch, rng);
    const DataBatch data = DataBatch::from(make_labeled(rng, arch, theta, 5, false));
    CollocationSet colloc = make_colloc(rng, 2, 1, 2);
    const double ell = eval.empirical_loss(theta, data, false).value;
    CHECK(eval.soft_loss(theta, data, colloc, 0.0, false).value == ell);
  }

  SUBCASE("random instance vs direct summation, gradient vs finite differences") {
    const VectorXd theta = testing::random_params(arch, rng);
    const DataBatch data = DataBatch::from(make_labeled(rng, arch, theta, 6, false));
    CollocationSet colloc = make_colloc(rng, 2, 1, 1);
    const double mu = 2.7;
    LossReport report = eval.soft_loss(theta, data, colloc, mu, true);

    // direct recomputation: sum over points, then squared residual norm
    double direct = 0.0;
    for (int i = 0; i < data.size(); ++i) {
      const double diff = data.targets[i] - forward_value(arch, theta, data.inputs(0, i), data.inputs(1, i));
      direct += diff * diff;
    }
    direct /= data.size();
    const VectorXd c = eval.residuals(theta, colloc);
    double csq = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) csq += c[i] * c[i];
    direct += mu * csq;
    CHECK(close(report.value, direct, 1e-13));

    const VectorXd fd = fd_gradient(
        [&](const VectorXd& th) { return eval.soft_loss(th, data, colloc, mu, false).value; }, theta);
    for (Eigen::Index i = 0; i < fd.size(); ++i) CHECK(close((*report.gradient)[i], fd[i], 1e-5));
  }
}

TEST_CASE("augmented Lagrangian") {
  Rng rng(47);
  const MLPArchitecture arch{2, 4};
  const PDEProblem problem{PDEKind::Reaction, 0.0, 4.0, 0.0, 2.0};
  ModelEval eval(arch, problem);
  const VectorXd theta = testing::random_params(arch, rng);
  const DataBatch data = DataBatch::from(make_labeled(rng, arch, theta, 5, false));
  CollocationSet colloc = make_colloc(rng, 2, 2, 1);
  const double mu = 1.7;

  SUBCASE("zero multipliers reduce it to the soft loss") {
    const VectorXd lambda = VectorXd::Zero(colloc.total());
    CHECK(close(eval.augmented_lagrangian(theta, lambda, data, colloc, mu, false).value,
                eval.soft_loss(theta, data, colloc, mu, false).value, 1e-15));
  }

  SUBCASE("vanishing constraints reduce it to the empirical loss for any lambda") {
    const MLPArchitecture tarch{2, 4};
    ModelEval transport(tarch, PDEProblem{PDEKind::Transport, 3.0, 0.0, 0.0, 2.0});
    const VectorXd zero = VectorXd::Zero(tarch.param_count());
    CollocationSet pde_bc = make_colloc(rng, 3, 2, 0);
    VectorXd lambda(pde_bc.total());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda[i] = rng.normal();
    const double ell = transport.empirical_loss(zero, data, false).value;
    CHECK(transport.augmented_lagrangian(zero, lambda, data, pde_bc, mu, false).value == ell);
  }

  SUBCASE("random instance vs direct summation, gradient vs finite differences") {
    VectorXd lambda(colloc.total());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda[i] = rng.normal();
    LossReport report = eval.augmented_lagrangian(theta, lambda, data, colloc, mu, true);
    const VectorXd c = eval.residuals(theta, colloc);
    const double direct =
        eval.empirical_loss(theta, data, false).value + lambda.dot(c) + mu * c.squaredNorm();
    CHECK(close(report.value, direct, 1e-13));
    const VectorXd fd = fd_gradient(
        [&](const VectorXd& th) {
          return eval.augmented_lagrangian(th, lambda, data, colloc, mu, false).value;
        },
        theta);
    for (Eigen::Index i = 0; i < fd.size(); ++i) CHECK(close((*report.gradient)[i], fd[i], 1e-5));
  }
}

TEST_CASE("merit function") {
  Rng rng(53);
  const MLPArchitecture arch{2, 4};

  SUBCASE("loss 1, ||c|| 2, mu 3 gives 7") {
    // zero network on the reaction problem: each IC residual is exactly -1,
    // so four IC points give ||c|| = 2; one data point with target 1 gives
    // loss 1.
    ModelEval eval(arch, PDEProblem{PDEKind::Reaction, 0.0, 30.0, 0.0, 2.0});
    const VectorXd theta = VectorXd::Zero(arch.param_count());
    LabeledSet set;
    set.points.push_back({1.0, 0.5, 1.0});
    CollocationSet colloc;
    const double pi = kTwoPi / 2.0;
    for (int i = 0; i < 4; ++i) colloc.ic_xs.push_back(pi);
    CHECK(close(eval.merit(theta, DataBatch::from(set), colloc, 3.0), 7.0, 1e-14));
  }

  SUBCASE("merit minus empirical loss is mu ||c|| >= 0") {
    ModelEval eval(arch, PDEProblem{PDEKind::Reaction, 0.0, 4.0, 0.0, 2.0});
    for (int i = 0; i < 10; ++i) {
      const VectorXd theta = testing::random_params(arch, rng);
      const DataBatch data = DataBatch::from(make_labeled(rng, arch, theta, 4, false));
      CollocationSet colloc = make_colloc(rng, 2, 1, 1);
      const double mu = rng.uniform(0.1, 5.0);
      const double gap = eval.merit(theta, data, colloc, mu) -
                         eval.empirical_loss(theta, data, false).value;
      CHECK(gap >= 0.0);
      CHECK(close(gap, mu * eval.residuals(theta, colloc).norm(), 1e-12));
    }
  }
}

namespace {

// Independently coded local merit model, for checking predicted_reduction.
double merit_model(const VectorXd& d, double ell, const VectorXd& grad_l, const MatrixXd& hess,
                   const VectorXd& c, const MatrixXd& jac, double mu) {
  return ell + grad_l.dot(d) + 0.5 * d.dot(hess * d) + mu * (c + jac * d).norm();
}

}  // namespace

TEST_CASE("predicted reduction") {
  Rng rng(61);

  SUBCASE("zero step gives zero") {
    const VectorXd zero = VectorXd::Zero(3);
    const MatrixXd hess = MatrixXd::Identity(3, 3);
    CHECK(predicted_reduction(zero, VectorXd::Ones(3), hess, VectorXd::Ones(2),
                              MatrixXd::Ones(2, 3), 4.0) == 0.0);
  }

  SUBCASE("pure curvature case gives -1/2") {
    const int p = 4;
    VectorXd step = VectorXd::Zero(p);
    step[2] = 1.0;  // unit step
    const VectorXd grad_l = VectorXd::Zero(p);
    const MatrixXd hess = MatrixXd::Identity(p, p);
    const VectorXd c = VectorXd::Zero(2);
    MatrixXd jac = MatrixXd::Zero(2, p);
    jac(0, 0) = 1.0;
    jac(1, 1) = 1.0;  // J step = 0
    CHECK(close(predicted_reduction(step, grad_l, hess, c, jac, 3.0), -0.5, 1e-15));
  }

  SUBCASE("matches the separately coded model difference and is linear in mu") {
    for (int i = 0; i < 20; ++i) {
      const int p = 3, m = 2;
      VectorXd step(p), grad_l(p), c(m);
      MatrixXd a = MatrixXd::NullaryExpr(p, p, [&]() { return rng.normal(); });
      const MatrixXd hess = 0.5 * (a + a.transpose());
      const MatrixXd jac = MatrixXd::NullaryExpr(m, p, [&]() { return rng.normal(); });
      for (int k = 0; k < p; ++k) step[k] = rng.normal(), grad_l[k] = rng.normal();
      for (int k = 0; k < m; ++k) c[k] = rng.normal();
      const double ell = rng.normal();
      const double mu1 = rng.uniform(0.1, 3.0);
      const double mu2 = mu1 + rng.uniform(0.5, 2.0);

      const double pred1 = predicted_reduction(step, grad_l, hess, c, jac, mu1);
      const double pred2 = predicted_reduction(step, grad_l, hess, c, jac, mu2);
      const double model1 = merit_model(VectorXd::Zero(p), ell, grad_l, hess, c, jac, mu1) -
                            merit_model(step, ell, grad_l, hess, c, jac, mu1);
      CHECK(close(pred1, model1, 1e-12));

      // linear in mu: slope equals ||c|| - ||c + J step||
      const double slope = (pred2 - pred1) / (mu2 - mu1);
      CHECK(close(slope, c.norm() - (c + jac * step).norm(), 1e-11));
    }
  }
}
