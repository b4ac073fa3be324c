// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/metrics.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace hardpinn {

using Eigen::MatrixXd;

ReferenceGrid sample_network_grid(const MLPArchitecture& arch, const ParameterVector& theta,
                                  const PDEProblem& problem, int grid_nx, int grid_nt) {
  check_shape(arch, theta);
  if (grid_nx < 2 || grid_nt < 2) throw ConfigError("evaluation grid needs n_x, n_t >= 2");
  ReferenceGrid grid;
  grid.n_x = grid_nx;
  grid.n_t = grid_nt;
  grid.problem = problem;
  grid.values.resize(grid_nx, grid_nt);

  // Chunked batched forward: one column block of the (x, t) tensor at a time.
  constexpr int kChunk = 8192;
  Eigen::Matrix2Xd pts(2, kChunk);
  ValueBatch work;
  int filled = 0;
  std::vector<std::pair<int, int>> where(kChunk);
  auto flush = [&]() {
    if (filled == 0) return;
    forward_values(arch, theta, pts.leftCols(filled), work);
    for (int k = 0; k < filled; ++k) grid.values(where[static_cast<std::size_t>(k)].first,
                                                 where[static_cast<std::size_t>(k)].second) = work.out[k];
    filled = 0;
  };
  for (int i = 0; i < grid_nx; ++i) {
    for (int j = 0; j < grid_nt; ++j) {
      pts(0, filled) = grid.x_coord(i);
      pts(1, filled) = grid.t_coord(j);
      where[static_cast<std::size_t>(filled)] = {i, j};
      if (++filled == kChunk) flush();
    }
  }
  flush();
  return grid;
}

ErrorReport evaluate(const MLPArchitecture& arch, const ParameterVector& theta,
                     const PDEProblem& problem, int grid_nx, int grid_nt,
                     const ReferenceGrid* reference, const std::string* error_grid_csv) {
  const bool needs_reference = !has_analytic_solution(problem.kind);
  if (needs_reference) {
    if (reference == nullptr) {
      throw ConfigError("reaction-diffusion evaluation requires a reference grid");
    }
    if (reference->n_x != grid_nx || reference->n_t != grid_nt) {
      throw ConfigError("reference grid dimensions do not match the evaluation grid");
    }
  }

  ReferenceGrid predicted = sample_network_grid(arch, theta, problem, grid_nx, grid_nt);

  ErrorReport report;
  report.grid_nx = grid_nx;
  report.grid_nt = grid_nt;
  double abs_sum = 0.0, rel_sum = 0.0, diff_sq = 0.0, ref_sq = 0.0;
  MatrixXd err_grid;
  if (error_grid_csv != nullptr) err_grid.resize(grid_nx, grid_nt);
  for (int i = 0; i < grid_nx; ++i) {
    for (int j = 0; j < grid_nt; ++j) {
      const double truth = needs_reference
                               ? reference->values(i, j)
                               : analytic_solution(problem, predicted.x_coord(i), predicted.t_coord(j));
      const double diff = std::abs(predicted.values(i, j) - truth);
      abs_sum += diff;
      rel_sum += diff / std::max(std::abs(truth), kRelErrGuard);
      diff_sq += diff * diff;
      ref_sq += truth * truth;
      if (error_grid_csv != nullptr) err_grid(i, j) = diff;
    }
  }
  const double count = static_cast<double>(grid_nx) * grid_nt;
  report.abs_err = abs_sum / count;
  report.rel_err = rel_sum / count;
  report.rel_l2 = ref_sq > 0.0 ? std::sqrt(diff_sq / ref_sq) : std::sqrt(diff_sq);
  if (error_grid_csv != nullptr) {
    ReferenceGrid out = predicted;
    out.values = err_grid;
    out.save_csv(*error_grid_csv);
  }
  return report;
}

void export_heatmap(const MLPArchitecture& arch, const ParameterVector& theta,
                    const PDEProblem& problem, int grid_nx, int grid_nt, const std::string& path) {
  sample_network_grid(arch, theta, problem, grid_nx, grid_nt).save_csv(path);
}

}  // namespace hardpinn
