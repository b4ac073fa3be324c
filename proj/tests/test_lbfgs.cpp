// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>

#include "core/errors.hpp"
#include "core/lbfgs.hpp"
#include "doctest.h"

using namespace hardpinn;
using Eigen::VectorXd;

TEST_CASE("lbfgs: strictly convex quadratic lands on the analytic minimizer") {
  VectorXd target(5);
  target << 1.0, -2.0, 0.5, 3.0, -0.25;
  Objective fn = [&](const VectorXd& x, VectorXd* grad) {
    if (grad != nullptr) *grad = x - target;
    return 0.5 * (x - target).squaredNorm();
  };
  LbfgsOptions options;
  const LbfgsResult result = lbfgs_minimize(fn, VectorXd::Zero(5), options);
  CHECK((result.x - target).norm() <= 1e-8);
  CHECK(result.f <= 1e-16);
}

TEST_CASE("lbfgs: stationary start returns immediately") {
  Objective fn = [](const VectorXd& x, VectorXd* grad) {
    if (grad != nullptr) grad->setZero(x.size());
    return 3.0;
  };
  const LbfgsResult result = lbfgs_minimize(fn, VectorXd::Ones(3), LbfgsOptions{});
  CHECK(result.iterations == 0);
  CHECK(result.status == LbfgsStatus::GradientTol);
  CHECK(result.x == VectorXd::Ones(3));
}

TEST_CASE("lbfgs: Rosenbrock from the classic start") {
  Objective fn = [](const VectorXd& x, VectorXd* grad) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    if (grad != nullptr) {
      grad->resize(2);
      (*grad)[0] = -2.0 * a - 400.0 * x[0] * b;
      (*grad)[1] = 200.0 * b;
    }
    return a * a + 100.0 * b * b;
  };
  VectorXd x0(2);
  x0 << -1.2, 1.0;
  LbfgsOptions options;
  options.stop.l_max = 10000;
  const LbfgsResult result = lbfgs_minimize(fn, x0, options);
  CHECK(std::abs(result.x[0] - 1.0) <= 1e-6);
  CHECK(std::abs(result.x[1] - 1.0) <= 1e-6);
}

TEST_CASE("lbfgs: non-finite objective at the start is an input error") {
  Objective fn = [](const VectorXd& x, VectorXd* grad) {
    if (grad != nullptr) grad->setOnes(x.size());
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS(lbfgs_minimize(fn, VectorXd::Zero(2), LbfgsOptions{}), NumericError);
}

TEST_CASE("lbfgs: line-search floor reports a stall") {
  // The reported gradient claims descent along +d, but f grows steeply; the
  // growth stays representable down to the minimum step, so no Armijo step
  // can succeed.
  Objective fn = [](const VectorXd& x, VectorXd* grad) {
    if (grad != nullptr) {
      grad->resize(1);
      (*grad)[0] = -1.0;
    }
    return 1.0 + 1e6 * std::abs(x[0]);
  };
  const LbfgsResult result = lbfgs_minimize(fn, VectorXd::Zero(1), LbfgsOptions{});
  CHECK(result.status == LbfgsStatus::Stalled);
  CHECK(result.x[0] == 0.0);
}

TEST_CASE("lbfgs: iteration cap is honored") {
  Objective fn = [](const VectorXd& x, VectorXd* grad) {
    if (grad != nullptr) *grad = 2.0 * x;
    return x.squaredNorm();
  };
  LbfgsOptions options;
  options.stop.l_max = 3;
  const LbfgsResult result = lbfgs_minimize(fn, VectorXd::Constant(4, 100.0), options);
  CHECK(result.iterations <= 3);
}
