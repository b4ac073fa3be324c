// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "core/lbfgs.hpp"
#include "core/network.hpp"
#include "core/outer.hpp"
#include "core/pde.hpp"
#include "core/trsqp.hpp"
#include "json.hpp"

namespace hardpinn {

/// Everything one experiment needs; JSON round-trippable. Defaults follow the
/// full-scale setup; desk_scale() switches to the reduced preset that runs in
/// minutes on one core.
struct RunConfig {
  PDEProblem problem{PDEKind::Transport, 30.0, 0.0, 0.0, 2.0};
  MLPArchitecture network{4, 50};

  struct Data {
    int n_labeled = 1000;
    double noise_std = 0.01;
    int m_train = -1;     // -1: 12 for transport, 7 otherwise
    int m_pretrain = 150;
    std::optional<std::array<int, 3>> train_split;
    std::optional<std::array<int, 3>> pretrain_split;
    int grid_nx = 2560;
    int grid_nt = 1000;
  } data;

  struct Reference {
    int n_steps = 10000;
    std::string cache;  // optional CSV cache path
  } reference;

  std::string method = "trsqp";  // pinn | penalty | alm | trsqp

  std::optional<bool> pretrain_enabled;  // default: off for pinn, on otherwise
  StopCriterion pretrain_stop;
  StopCriterion inner_stop;
  OuterLoopConfig outer;
  double pinn_mu = 1.0;
  TrSqpConfig trsqp;

  struct Seeds {
    std::uint64_t params = 1;
    std::uint64_t labeled = 2;
    std::uint64_t train_colloc = 3;
    std::uint64_t pretrain_colloc = 4;
  } seeds;

  int lbfgs_memory = 10;
  int checkpoint_every = 0;
  bool export_heatmap = false;
  int sweep_workers = 1;
  std::string output_dir;

  bool pretrain_on() const { return pretrain_enabled.value_or(method != "pinn"); }
  int m_train_resolved() const {
    if (data.m_train >= 0) return data.m_train;
    return problem.kind == PDEKind::Transport ? 12 : 7;
  }

  void validate() const;
  void apply_desk_scale();

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_json_text(const std::string& text);
};

/// Environment variable naming the default output root for runs.
inline constexpr const char* kOutputRootEnv = "HARDPINN_OUTPUT_ROOT";

}  // namespace hardpinn
