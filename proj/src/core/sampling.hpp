// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/pde.hpp"

namespace hardpinn {

struct LabeledPoint {
  double x = 0.0;
  double t = 0.0;
  double u = 0.0;
};

struct LabeledSet {
  std::vector<LabeledPoint> points;
  int size() const { return static_cast<int>(points.size()); }
};

/// Unlabeled collocation points. A BC time t encodes the boundary pair
/// (0, t), (2pi, t); an IC abscissa x encodes the point (x, 0).
struct CollocationSet {
  std::vector<std::pair<double, double>> pde_points;
  std::vector<double> bc_times;
  std::vector<double> ic_xs;

  int m_pde() const { return static_cast<int>(pde_points.size()); }
  int m_bc() const { return static_cast<int>(bc_times.size()); }
  int m_ic() const { return static_cast<int>(ic_xs.size()); }
  int total() const { return m_pde() + m_bc() + m_ic(); }
};

/// Observations u_i = u(x_i, t_i) + eps_i with Gaussian noise of the given
/// std. Transport/reaction sample (x, t) uniformly on the domain and use the
/// closed-form solution; reaction-diffusion draws uniformly from the
/// reference grid points (`reference` required there).
LabeledSet sample_labeled(const PDEProblem& problem, const ReferenceGrid* reference, int n,
                          double noise_std, std::uint64_t seed);

/// Uniform collocation draws. With no explicit split, m_total is divided
/// evenly; a remainder goes first to the PDE block, then to the BC block.
CollocationSet sample_collocation(int m_total, std::optional<std::array<int, 3>> split,
                                  std::uint64_t seed);

/// Even split sizes (PDE, BC, IC) used by sample_collocation.
std::array<int, 3> even_split(int m_total);

/// Tensor evaluation grid: x uniform on [0, 2pi) excluding the duplicate
/// endpoint, t uniform on [0, 1] including both ends; x-major order.
std::vector<std::pair<double, double>> evaluation_grid(int n_x, int n_t);

void export_labeled_csv(const std::string& path, const LabeledSet& set);
void export_collocation_csv(const std::string& path, const CollocationSet& set);

}  // namespace hardpinn
