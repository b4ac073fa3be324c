// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "core/jet.hpp"
#include "core/tape.hpp"

namespace hardpinn {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class PDEKind { Transport, Reaction, ReactionDiffusion };

const char* pde_kind_name(PDEKind kind);
PDEKind pde_kind_from_name(const std::string& name);

/// One of the three periodic problems on [0, 2pi] x [0, 1]:
///   transport            u_t + beta u_x = 0,                u(x,0) = sin(x)
///   reaction             u_t - alpha u (1-u) = 0,           u(x,0) = exp(-zeta (x-pi)^2)
///   reaction-diffusion   u_t - tau u_xx - alpha u (1-u) = 0, same Gaussian IC
/// All share the periodic boundary condition u(0,t) = u(2pi,t).
struct PDEProblem {
  PDEKind kind = PDEKind::Transport;
  double beta = 0.0;   // transport coefficient
  double alpha = 0.0;  // reaction coefficient
  double tau = 0.0;    // diffusion coefficient, > 0 for reaction-diffusion
  double zeta = 2.0;   // initial-condition coefficient

  /// Initial condition g(x).
  double initial_condition(double x) const;
};

/// PDE operator applied to a jet at a collocation point.
double pde_residual(const PDEProblem& problem, const Jet2& jet);

/// Tape-recorded residual from a tape-recorded jet.
ad::Var pde_residual_tape(ad::Tape& tape, const PDEProblem& problem, const ad::JetVar& jet);

/// Closed-form solution; transport and reaction only.
double analytic_solution(const PDEProblem& problem, double x, double t);

bool has_analytic_solution(PDEKind kind);

/// Solution samples on a periodic space grid (x_i = 2pi i / n_x, the
/// duplicate endpoint excluded) times a uniform time grid including both 0
/// and 1.
struct ReferenceGrid {
  int n_x = 0;
  int n_t = 0;
  PDEProblem problem;
  Eigen::MatrixXd values;  // n_x rows, n_t columns

  double x_coord(int i) const { return kTwoPi * i / n_x; }
  double t_coord(int j) const { return n_t > 1 ? static_cast<double>(j) / (n_t - 1) : 0.0; }

  void save_csv(const std::string& path) const;
  static ReferenceGrid load_csv(const std::string& path);
};

/// Solves the reaction-diffusion problem by Strang splitting with exact
/// logistic half-steps and an exact Fourier diffusion step. `n_steps` is the
/// total time-step budget over [0, 1]; each of the n_t - 1 output intervals
/// is integrated with ceil(n_steps / (n_t - 1)) sub-steps so that time slices
/// land exactly on the output grid. `ic_override`, when given, replaces the
/// problem's initial data with samples on the space grid (test hook).
ReferenceGrid reference_solve(const PDEProblem& problem, int n_x, int n_steps, int n_t,
                              const std::vector<double>* ic_override = nullptr);

}  // namespace hardpinn
