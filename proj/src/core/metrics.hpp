// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "core/network.hpp"
#include "core/pde.hpp"

namespace hardpinn {

/// Grid-averaged prediction errors. abs_err and rel_err are per-point means
/// (the relative denominator guarded at 1e-8); rel_l2 is the global
/// ||u_pred - u|| / ||u||, which stays finite on solution zero sets.
struct ErrorReport {
  double abs_err = 0.0;
  double rel_err = 0.0;
  double rel_l2 = 0.0;
  int grid_nx = 0;
  int grid_nt = 0;
};

inline constexpr double kRelErrGuard = 1e-8;

/// Errors of u_theta against the closed-form solution (transport, reaction)
/// or a cached reference grid (reaction-diffusion; its dimensions must match
/// the evaluation grid). Optionally writes the per-point |error| grid as CSV.
ErrorReport evaluate(const MLPArchitecture& arch, const ParameterVector& theta,
                     const PDEProblem& problem, int grid_nx, int grid_nt,
                     const ReferenceGrid* reference,
                     const std::string* error_grid_csv = nullptr);

/// Samples u_theta on the evaluation grid and writes it in the grid CSV
/// format (round-trips bit-exactly through ReferenceGrid::load_csv).
void export_heatmap(const MLPArchitecture& arch, const ParameterVector& theta,
                    const PDEProblem& problem, int grid_nx, int grid_nt, const std::string& path);

/// u_theta sampled on the evaluation grid.
ReferenceGrid sample_network_grid(const MLPArchitecture& arch, const ParameterVector& theta,
                                  const PDEProblem& problem, int grid_nx, int grid_nt);

}  // namespace hardpinn
