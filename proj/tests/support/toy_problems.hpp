// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "core/constrained.hpp"
#include "core/rng.hpp"

namespace hardpinn::testing {

/// min theta^2  s.t.  theta - 1 = 0. Solution theta* = 1, multiplier -2.
class ScalarToy final : public ConstrainedProblem {
 public:
  int dim() const override { return 1; }
  int num_constraints() const override { return 1; }
  double loss(const Eigen::VectorXd& th) override { return th[0] * th[0]; }
  double loss_grad(const Eigen::VectorXd& th, Eigen::VectorXd& grad) override {
    grad.resize(1);
    grad[0] = 2.0 * th[0];
    return th[0] * th[0];
  }
  void constraints(const Eigen::VectorXd& th, Eigen::VectorXd& c) override {
    c.resize(1);
    c[0] = th[0] - 1.0;
  }
  void constraints_jacobian(const Eigen::VectorXd& th, Eigen::VectorXd& c,
                            Eigen::MatrixXd& jac) override {
    constraints(th, c);
    jac.resize(1, 1);
    jac(0, 0) = 1.0;
  }
};

/// min (th1-2)^2 + (th2-2)^2  s.t.  th1^2 + th2^2 = 2. Solution (1, 1).
class CircleToy final : public ConstrainedProblem {
 public:
  int dim() const override { return 2; }
  int num_constraints() const override { return 1; }
  double loss(const Eigen::VectorXd& th) override {
    return (th[0] - 2.0) * (th[0] - 2.0) + (th[1] - 2.0) * (th[1] - 2.0);
  }
  double loss_grad(const Eigen::VectorXd& th, Eigen::VectorXd& grad) override {
    grad.resize(2);
    grad[0] = 2.0 * (th[0] - 2.0);
    grad[1] = 2.0 * (th[1] - 2.0);
    return loss(th);
  }
  void constraints(const Eigen::VectorXd& th, Eigen::VectorXd& c) override {
    c.resize(1);
    c[0] = th[0] * th[0] + th[1] * th[1] - 2.0;
  }
  void constraints_jacobian(const Eigen::VectorXd& th, Eigen::VectorXd& c,
                            Eigen::MatrixXd& jac) override {
    constraints(th, c);
    jac.resize(1, 2);
    jac(0, 0) = 2.0 * th[0];
    jac(0, 1) = 2.0 * th[1];
  }
};

/// Random smooth instance for fuzzing: convex quadratic plus a small quartic
/// objective, with a mix of linear, spherical and sinusoidal constraint rows.
class RandomSmoothToy final : public ConstrainedProblem {
 public:
  RandomSmoothToy(Rng& rng, int p, int m) : p_(p), m_(m) {
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(p, p, [&]() { return rng.normal(); });
    q_ = a.transpose() * a / p + 0.5 * Eigen::MatrixXd::Identity(p, p);
    center_ = Eigen::VectorXd::NullaryExpr(p, [&]() { return rng.normal(); });
    quartic_ = rng.uniform(0.0, 0.05);
    for (int i = 0; i < m; ++i) {
      Row row;
      row.kind = static_cast<int>(rng.below(3));
      row.normal = Eigen::VectorXd::NullaryExpr(p, [&]() { return rng.normal(); });
      row.offset = rng.uniform(-1.0, 1.0);
      rows_.push_back(row);
    }
  }

  int dim() const override { return p_; }
  int num_constraints() const override { return m_; }

  double loss(const Eigen::VectorXd& th) override {
    const Eigen::VectorXd d = th - center_;
    return 0.5 * d.dot(q_ * d) + quartic_ * d.array().pow(4).sum();
  }
  double loss_grad(const Eigen::VectorXd& th, Eigen::VectorXd& grad) override {
    const Eigen::VectorXd d = th - center_;
    grad = q_ * d + 4.0 * quartic_ * d.array().pow(3).matrix();
    return loss(th);
  }
  void constraints(const Eigen::VectorXd& th, Eigen::VectorXd& c) override {
    c.resize(m_);
    for (int i = 0; i < m_; ++i) c[i] = row_value(rows_[static_cast<std::size_t>(i)], th);
  }
  void constraints_jacobian(const Eigen::VectorXd& th, Eigen::VectorXd& c,
                            Eigen::MatrixXd& jac) override {
    constraints(th, c);
    jac.resize(m_, p_);
    for (int i = 0; i < m_; ++i) {
      jac.row(i) = row_grad(rows_[static_cast<std::size_t>(i)], th).transpose();
    }
  }

 private:
  struct Row {
    int kind = 0;  // 0 linear, 1 sphere, 2 sinusoid
    Eigen::VectorXd normal;
    double offset = 0.0;
  };

  static double row_value(const Row& row, const Eigen::VectorXd& th) {
    switch (row.kind) {
      case 0: return row.normal.dot(th) - row.offset;
      case 1: return 0.5 * th.squaredNorm() - 1.0 - row.offset;
      default: return std::sin(th[0]) + 0.3 * row.normal.dot(th) - row.offset;
    }
  }
  static Eigen::VectorXd row_grad(const Row& row, const Eigen::VectorXd& th) {
    switch (row.kind) {
      case 0: return row.normal;
      case 1: return th;
      default: {
        Eigen::VectorXd g = 0.3 * row.normal;
        g[0] += std::cos(th[0]);
        return g;
      }
    }
  }

  int p_, m_;
  Eigen::MatrixXd q_;
  Eigen::VectorXd center_;
  double quartic_ = 0.0;
  std::vector<Row> rows_;
};

}  // namespace hardpinn::testing
