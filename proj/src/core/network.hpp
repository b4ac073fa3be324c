// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "core/jet.hpp"
#include "core/tape.hpp"

namespace hardpinn {

using ParameterVector = Eigen::VectorXd;

/// Fully-connected tanh MLP u(x, t) with `depth` hidden layers of `width`
/// neurons. Parameters are stored flat, layer-major: for each linear map the
/// weight matrix (out x in, column-major) followed by its bias vector.
struct MLPArchitecture {
  int depth = 4;
  int width = 50;

  static constexpr int kInputDim = 2;
  static constexpr int kOutputDim = 1;

  int layer_count() const { return depth + 1; }
  int layer_in(int l) const { return l == 0 ? kInputDim : width; }
  int layer_out(int l) const { return l == depth ? kOutputDim : width; }
  int layer_offset(int l) const;
  int param_count() const;
  bool operator==(const MLPArchitecture&) const = default;
};

/// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
/// Deterministic per seed.
ParameterVector init_params(const MLPArchitecture& arch, std::uint64_t seed);

/// u(x, t).
double forward_value(const MLPArchitecture& arch, const ParameterVector& theta, double x, double t);

/// u and its input derivatives (d/dx, d/dt, d2/dx2) at (x, t), exact to
/// machine precision via forward jet propagation.
Jet2 eval_jet(const MLPArchitecture& arch, const ParameterVector& theta, double x, double t);

/// Tape-recorded forwards; the tape must have been reset with `theta`.
ad::Var forward_value_tape(ad::Tape& tape, const MLPArchitecture& arch, double x, double t);
ad::JetVar forward_jet_tape(ad::Tape& tape, const MLPArchitecture& arch, double x, double t);

// ---------------------------------------------------------------------------
// Batched evaluation. One matrix product per layer over a whole point set;
// the saved layer activations support reverse passes for weighted sums of
// outputs, which is how the data loss and penalty-style gradients are
// assembled without touching the scalar tape.

struct ValueBatch {
  std::vector<Eigen::MatrixXd> h;  // h[0] = inputs (2 x n), then activations
  Eigen::RowVectorXd out;          // u at each point
};

struct JetChannels {
  Eigen::MatrixXd u, ux, ut, uxx;
};

struct JetBatch {
  std::vector<JetChannels> h;  // post-activation per layer, h[0] = input jets
  std::vector<JetChannels> z;  // pre-activation per hidden layer
  JetChannels out;             // 1 x n rows
};

void forward_values(const MLPArchitecture& arch, const ParameterVector& theta,
                    const Eigen::Matrix2Xd& xt, ValueBatch& batch);

/// Accumulates d(sum_i seed_i * u_i)/d(theta) into `grad` (length p).
void backward_values(const MLPArchitecture& arch, const ParameterVector& theta,
                     const ValueBatch& batch, const Eigen::RowVectorXd& seed,
                     Eigen::VectorXd& grad);

void forward_jets(const MLPArchitecture& arch, const ParameterVector& theta,
                  const Eigen::Matrix2Xd& xt, JetBatch& batch);

/// Accumulates the gradient of sum_i (seed.u_i * u_i + seed.ux_i * ux_i +
/// seed.ut_i * ut_i + seed.uxx_i * uxx_i) into `grad`.
void backward_jets(const MLPArchitecture& arch, const ParameterVector& theta,
                   const JetBatch& batch, const JetChannels& seed, Eigen::VectorXd& grad);

// ---------------------------------------------------------------------------
// Checkpoints: one JSON header line (format, version, architecture, count)
// followed by the raw little-endian float64 payload.

void save_params(const std::string& path, const MLPArchitecture& arch, const ParameterVector& theta);
ParameterVector load_params(const std::string& path, MLPArchitecture& arch_out);

void check_shape(const MLPArchitecture& arch, const ParameterVector& theta);

}  // namespace hardpinn
