// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/sampling.hpp"

#include <cstdio>
#include <fstream>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace hardpinn {

LabeledSet sample_labeled(const PDEProblem& problem, const ReferenceGrid* reference, int n,
                          double noise_std, std::uint64_t seed) {
  if (n <= 0) throw ConfigError("labeled sample size must be positive");
  if (noise_std < 0.0) throw ConfigError("noise std must be non-negative");
  const bool from_grid = problem.kind == PDEKind::ReactionDiffusion;
  if (from_grid && reference == nullptr) {
    throw ConfigError("reaction-diffusion labels require a reference grid");
  }

  Rng rng(seed);
  LabeledSet set;
  set.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    LabeledPoint p;
    if (from_grid) {
      const int ix = static_cast<int>(rng.below(static_cast<std::uint64_t>(reference->n_x)));
      const int it = static_cast<int>(rng.below(static_cast<std::uint64_t>(reference->n_t)));
      p.x = reference->x_coord(ix);
      p.t = reference->t_coord(it);
      p.u = reference->values(ix, it);
    } else {
      p.x = rng.uniform(0.0, kTwoPi);
      p.t = rng.uniform(0.0, 1.0);
      p.u = analytic_solution(problem, p.x, p.t);
    }
    if (noise_std > 0.0) p.u += noise_std * rng.normal();
    set.points.push_back(p);
  }
  return set;
}

std::array<int, 3> even_split(int m_total) {
  const int base = m_total / 3;
  const int rem = m_total % 3;
  return {base + (rem >= 1 ? 1 : 0), base + (rem >= 2 ? 1 : 0), base};
}

CollocationSet sample_collocation(int m_total, std::optional<std::array<int, 3>> split,
                                  std::uint64_t seed) {
  std::array<int, 3> sizes{};
  if (split) {
    sizes = *split;
    if (sizes[0] < 0 || sizes[1] < 0 || sizes[2] < 0 || sizes[0] + sizes[1] + sizes[2] != m_total) {
      throw ConfigError("collocation split does not sum to the requested total");
    }
  } else {
    if (m_total < 3) throw ConfigError("even collocation split needs at least 3 points");
    sizes = even_split(m_total);
  }

  Rng rng(seed);
  CollocationSet set;
  set.pde_points.reserve(static_cast<std::size_t>(sizes[0]));
  for (int i = 0; i < sizes[0]; ++i) {
    set.pde_points.emplace_back(rng.uniform(0.0, kTwoPi), rng.uniform(0.0, 1.0));
  }
  set.bc_times.reserve(static_cast<std::size_t>(sizes[1]));
  for (int i = 0; i < sizes[1]; ++i) set.bc_times.push_back(rng.uniform(0.0, 1.0));
  set.ic_xs.reserve(static_cast<std::size_t>(sizes[2]));
  for (int i = 0; i < sizes[2]; ++i) set.ic_xs.push_back(rng.uniform(0.0, kTwoPi));
  return set;
}

std::vector<std::pair<double, double>> evaluation_grid(int n_x, int n_t) {
  if (n_x < 2 || n_t < 2) throw ConfigError("evaluation grid needs n_x, n_t >= 2");
  std::vector<std::pair<double, double>> grid;
  grid.reserve(static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_t));
  for (int i = 0; i < n_x; ++i) {
    const double x = kTwoPi * i / n_x;
    for (int j = 0; j < n_t; ++j) {
      grid.emplace_back(x, static_cast<double>(j) / (n_t - 1));
    }
  }
  return grid;
}

namespace {

void put(std::ofstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

void export_labeled_csv(const std::string& path, const LabeledSet& set) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open CSV for writing: " + path);
  out << "x,t,u\n";
  for (const auto& p : set.points) {
    put(out, p.x);
    out << ",";
    put(out, p.t);
    out << ",";
    put(out, p.u);
    out << "\n";
  }
}

void export_collocation_csv(const std::string& path, const CollocationSet& set) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open CSV for writing: " + path);
  out << "role,x,t\n";
  for (const auto& [x, t] : set.pde_points) {
    out << "pde,";
    put(out, x);
    out << ",";
    put(out, t);
    out << "\n";
  }
  for (double t : set.bc_times) {
    out << "bc,,";
    put(out, t);
    out << "\n";
  }
  for (double x : set.ic_xs) {
    out << "ic,";
    put(out, x);
    out << ",0\n";
  }
}

}  // namespace hardpinn
