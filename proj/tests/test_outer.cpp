// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "core/constrained.hpp"
#include "core/errors.hpp"
#include "core/outer.hpp"
#include "core/sampling.hpp"
#include "doctest.h"
#include "support/test_utils.hpp"
#include "support/toy_problems.hpp"

using namespace hardpinn;
using hardpinn::testing::CircleToy;
using hardpinn::testing::ScalarToy;
using Eigen::VectorXd;

TEST_CASE("penalty loop: mu sequence and outer iteration count") {
  ScalarToy toy;
  std::vector<double> mus;
  OuterLoopConfig outer;  // mu0 = 1, rho = 1.1, 100 exponent
  LbfgsOptions inner;
  inner.stop.l_max = 50;
  const OuterResult result = penalty_train(toy, VectorXd::Zero(1), outer, inner,
                                           [&](const OuterRecord& r) { mus.push_back(r.mu); });
  CHECK(result.outer_iterations == 100);
  REQUIRE(mus.size() == 100);
  CHECK(mus[0] == 1.0);
  for (std::size_t k = 0; k < mus.size(); ++k) {
    CHECK(hardpinn::testing::close(mus[k], std::pow(1.1, static_cast<double>(k)), 1e-13));
  }
  for (std::size_t k = 1; k < mus.size(); ++k) CHECK(mus[k] > mus[k - 1]);
}

TEST_CASE("penalty loop: scalar toy converges with decreasing infeasibility") {
  ScalarToy toy;
  std::vector<double> c_norms;
  OuterLoopConfig outer;
  LbfgsOptions inner;
  const OuterResult result = penalty_train(toy, VectorXd::Zero(1), outer, inner,
                                           [&](const OuterRecord& r) { c_norms.push_back(r.c_norm); });
  CHECK(std::abs(result.theta[0] - 1.0) <= 1e-2);
  // infeasibility decreases over the outer loop (allowing tiny solver noise)
  CHECK(c_norms.back() < c_norms.front());
  CHECK(c_norms.back() <= 1e-2);
}

TEST_CASE("alm loop: scalar toy recovers the analytic multiplier") {
  ScalarToy toy;
  OuterLoopConfig outer;
  LbfgsOptions inner;
  const OuterResult result = alm_train(toy, VectorXd::Zero(1), outer, inner);
  CHECK(std::abs(result.theta[0] - 1.0) <= 1e-3);
  REQUIRE(result.lambda.size() == 1);
  CHECK(std::abs(result.lambda[0] - (-2.0)) <= 1e-2);
}

TEST_CASE("alm with zero multipliers matches the first penalty subproblem") {
  // identical first subproblem objective: phi_AL(theta, 0) = phi_P(theta)
  ScalarToy toy;
  OuterLoopConfig one_round;
  one_round.mu_max_exponent = 1;
  LbfgsOptions inner;
  const OuterResult penalty = penalty_train(toy, VectorXd::Zero(1), one_round, inner);
  const OuterResult alm = alm_train(toy, VectorXd::Zero(1), one_round, inner);
  CHECK(penalty.theta == alm.theta);
}

TEST_CASE("alm on the circle toy") {
  CircleToy toy;
  OuterLoopConfig outer;
  LbfgsOptions inner;
  VectorXd x0(2);
  x0 << 2.0, 0.0;
  const OuterResult result = alm_train(toy, x0, outer, inner);
  CHECK(std::abs(result.theta[0] - 1.0) <= 1e-2);
  CHECK(std::abs(result.theta[1] - 1.0) <= 1e-2);
}

TEST_CASE("pinn_train: mu = 0 is pure regression and fits noiseless data") {
  const MLPArchitecture arch{2, 10};
  const PDEProblem problem{PDEKind::Transport, 1.0, 0.0, 0.0, 2.0};
  const LabeledSet labeled = sample_labeled(problem, nullptr, 60, 0.0, 3);
  const CollocationSet colloc = sample_collocation(6, std::nullopt, 4);
  PinnProblem pinn(arch, problem, labeled, colloc);
  LbfgsOptions options;
  options.stop.l_max = 2000;
  const LbfgsResult result = pinn_train(pinn, 0.0, init_params(arch, 7), options);
  CHECK(pinn.loss(result.x) <= 1e-4);
}

TEST_CASE("pinn_train is deterministic for a fixed seed") {
  const MLPArchitecture arch{2, 6};
  const PDEProblem problem{PDEKind::Transport, 2.0, 0.0, 0.0, 2.0};
  const LabeledSet labeled = sample_labeled(problem, nullptr, 30, 0.01, 3);
  const CollocationSet colloc = sample_collocation(6, std::nullopt, 4);
  PinnProblem a(arch, problem, labeled, colloc);
  PinnProblem b(arch, problem, labeled, colloc);
  LbfgsOptions options;
  options.stop.l_max = 50;
  const LbfgsResult ra = pinn_train(a, 1.0, init_params(arch, 9), options);
  const LbfgsResult rb = pinn_train(b, 1.0, init_params(arch, 9), options);
  CHECK(ra.x == rb.x);
}

TEST_CASE("pretrain: reaches low infeasibility on desk-scale transport") {
  const MLPArchitecture arch{2, 20};
  const PDEProblem problem{PDEKind::Transport, 1.0, 0.0, 0.0, 2.0};
  const LabeledSet labeled = sample_labeled(problem, nullptr, 10, 0.0, 3);
  const CollocationSet colloc = sample_collocation(150, std::nullopt, 4);
  PinnProblem pinn(arch, problem, labeled, colloc);
  LbfgsOptions options;
  options.stop.l_max = 5000;
  const LbfgsResult result = pretrain(pinn, init_params(arch, 1), options);
  CHECK(result.f / colloc.total() <= 1e-4);  // ||c||^2 / M
}

TEST_CASE("pretrain: empty collocation set is a configuration error") {
  const MLPArchitecture arch{2, 4};
  const PDEProblem problem{PDEKind::Transport, 1.0, 0.0, 0.0, 2.0};
  const LabeledSet labeled = sample_labeled(problem, nullptr, 5, 0.0, 3);
  PinnProblem pinn(arch, problem, labeled, CollocationSet{});
  CHECK_THROWS_AS(pretrain(pinn, init_params(arch, 1), LbfgsOptions{}), ConfigError);
}

TEST_CASE("pretrain: deterministic per seed") {
  const MLPArchitecture arch{2, 8};
  const PDEProblem problem{PDEKind::Reaction, 0.0, 2.0, 0.0, 2.0};
  const LabeledSet labeled = sample_labeled(problem, nullptr, 10, 0.0, 3);
  const CollocationSet colloc = sample_collocation(30, std::nullopt, 4);
  PinnProblem a(arch, problem, labeled, colloc);
  PinnProblem b(arch, problem, labeled, colloc);
  LbfgsOptions options;
  options.stop.l_max = 100;
  const LbfgsResult ra = pretrain(a, init_params(arch, 5), options);
  const LbfgsResult rb = pretrain(b, init_params(arch, 5), options);
  CHECK(ra.x == rb.x);
}
