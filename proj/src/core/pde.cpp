// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/pde.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace hardpinn {

const char* pde_kind_name(PDEKind kind) {
  switch (kind) {
    case PDEKind::Transport: return "transport";
    case PDEKind::Reaction: return "reaction";
    case PDEKind::ReactionDiffusion: return "reaction_diffusion";
  }
  return "?";
}

PDEKind pde_kind_from_name(const std::string& name) {
  if (name == "transport") return PDEKind::Transport;
  if (name == "reaction") return PDEKind::Reaction;
  if (name == "reaction_diffusion" || name == "reaction-diffusion") return PDEKind::ReactionDiffusion;
  throw ConfigError("unknown PDE kind: " + name);
}

double PDEProblem::initial_condition(double x) const {
  if (kind == PDEKind::Transport) return std::sin(x);
  const double d = x - kTwoPi / 2.0;
  return std::exp(-zeta * d * d);
}

double pde_residual(const PDEProblem& problem, const Jet2& jet) {
  switch (problem.kind) {
    case PDEKind::Transport:
      return jet.du_dt + problem.beta * jet.du_dx;
    case PDEKind::Reaction:
      return jet.du_dt - problem.alpha * jet.u * (1.0 - jet.u);
    case PDEKind::ReactionDiffusion:
      return jet.du_dt - problem.tau * jet.d2u_dx2 - problem.alpha * jet.u * (1.0 - jet.u);
  }
  return 0.0;
}

ad::Var pde_residual_tape(ad::Tape& tape, const PDEProblem& problem, const ad::JetVar& jet) {
  switch (problem.kind) {
    case PDEKind::Transport:
      return tape.add(jet.du_dt, tape.scale(jet.du_dx, problem.beta));
    case PDEKind::Reaction: {
      // u (1 - u) = u - u^2
      const ad::Var logistic = tape.sub(jet.u, tape.square(jet.u));
      return tape.sub(jet.du_dt, tape.scale(logistic, problem.alpha));
    }
    case PDEKind::ReactionDiffusion: {
      const ad::Var logistic = tape.sub(jet.u, tape.square(jet.u));
      return tape.sub(tape.sub(jet.du_dt, tape.scale(jet.d2u_dx2, problem.tau)),
                      tape.scale(logistic, problem.alpha));
    }
  }
  return ad::Var{};
}

bool has_analytic_solution(PDEKind kind) { return kind != PDEKind::ReactionDiffusion; }

double analytic_solution(const PDEProblem& problem, double x, double t) {
  switch (problem.kind) {
    case PDEKind::Transport:
      return std::sin(x - problem.beta * t);
    case PDEKind::Reaction: {
      const double u0 = problem.initial_condition(x);
      const double e = u0 * std::exp(problem.alpha * t);
      return e / (e + 1.0 - u0);
    }
    case PDEKind::ReactionDiffusion:
      throw ConfigError("reaction-diffusion has no closed-form solution; use reference_solve");
  }
  return 0.0;
}

// --- spectral solver ---------------------------------------------------------

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT; inverse applies conjugation and 1/n.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 1.0 : -1.0) * kTwoPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

// Exact flow of u' = alpha u (1 - u) over time h.
inline double logistic_step(double u, double ealpha_h) {
  const double e = u * ealpha_h;
  return e / (e + 1.0 - u);
}

}  // namespace

ReferenceGrid reference_solve(const PDEProblem& problem, int n_x, int n_steps, int n_t,
                              const std::vector<double>* ic_override) {
  if (!is_power_of_two(n_x)) {
    std::ostringstream msg;
    msg << "reference grid size n_x = " << n_x << " must be a power of two";
    throw ConfigError(msg.str());
  }
  if (n_t < 2) throw ConfigError("reference grid needs n_t >= 2");
  if (n_steps < n_t - 1) n_steps = n_t - 1;
  if (problem.kind == PDEKind::ReactionDiffusion && problem.tau < 0.0) {
    throw ConfigError("diffusion coefficient tau must be >= 0");
  }

  ReferenceGrid grid;
  grid.n_x = n_x;
  grid.n_t = n_t;
  grid.problem = problem;
  grid.values.resize(n_x, n_t);

  std::vector<double> u(static_cast<std::size_t>(n_x));
  if (ic_override) {
    if (static_cast<int>(ic_override->size()) != n_x) {
      throw ConfigError("initial-condition override has wrong length");
    }
    u = *ic_override;
  } else {
    for (int i = 0; i < n_x; ++i) u[static_cast<std::size_t>(i)] = problem.initial_condition(grid.x_coord(i));
  }
  for (int i = 0; i < n_x; ++i) grid.values(i, 0) = u[static_cast<std::size_t>(i)];

  const int per_interval = (n_steps + n_t - 2) / (n_t - 1);
  const double dt = (1.0 / (n_t - 1)) / per_interval;
  const double ealpha_half = std::exp(problem.alpha * dt / 2.0);

  // Fourier multipliers exp(-tau k^2 dt) on integer wavenumbers.
  std::vector<double> decay(static_cast<std::size_t>(n_x));
  for (int j = 0; j < n_x; ++j) {
    const int k = j <= n_x / 2 ? j : j - n_x;
    decay[static_cast<std::size_t>(j)] = std::exp(-problem.tau * static_cast<double>(k) * k * dt);
  }

  std::vector<std::complex<double>> hat(static_cast<std::size_t>(n_x));
  for (int slice = 1; slice < n_t; ++slice) {
    for (int s = 0; s < per_interval; ++s) {
      for (auto& v : u) v = logistic_step(v, ealpha_half);
      for (int i = 0; i < n_x; ++i) hat[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
      fft_radix2(hat, false);
      for (int i = 0; i < n_x; ++i) hat[static_cast<std::size_t>(i)] *= decay[static_cast<std::size_t>(i)];
      fft_radix2(hat, true);
      for (int i = 0; i < n_x; ++i) u[static_cast<std::size_t>(i)] = hat[static_cast<std::size_t>(i)].real();
      for (auto& v : u) v = logistic_step(v, ealpha_half);
    }
    for (int i = 0; i < n_x; ++i) grid.values(i, slice) = u[static_cast<std::size_t>(i)];
  }
  return grid;
}

// --- grid CSV ---------------------------------------------------------------

void ReferenceGrid::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open grid CSV for writing: " + path);
  out << "n_x,n_t,kind,beta,alpha,tau,zeta\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  out << n_x << "," << n_t << "," << pde_kind_name(problem.kind) << ",";
  put(problem.beta);
  out << ",";
  put(problem.alpha);
  out << ",";
  put(problem.tau);
  out << ",";
  put(problem.zeta);
  out << "\n";
  for (int i = 0; i < n_x; ++i) {
    for (int j = 0; j < n_t; ++j) {
      if (j) out << ",";
      put(values(i, j));
    }
    out << "\n";
  }
  if (!out) throw IoError("failed writing grid CSV: " + path);
}

ReferenceGrid ReferenceGrid::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid CSV: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("n_x,n_t,kind", 0) != 0) {
    throw IoError("malformed grid CSV header: " + path);
  }
  if (!std::getline(in, line)) throw IoError("truncated grid CSV: " + path);

  ReferenceGrid grid;
  {
    std::istringstream row(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(row, field, ',')) throw IoError("malformed grid CSV row: " + path);
      return field;
    };
    grid.n_x = std::stoi(next());
    grid.n_t = std::stoi(next());
    grid.problem.kind = pde_kind_from_name(next());
    grid.problem.beta = std::stod(next());
    grid.problem.alpha = std::stod(next());
    grid.problem.tau = std::stod(next());
    grid.problem.zeta = std::stod(next());
  }
  if (grid.n_x <= 0 || grid.n_t <= 0) throw IoError("bad grid dimensions in: " + path);
  grid.values.resize(grid.n_x, grid.n_t);
  for (int i = 0; i < grid.n_x; ++i) {
    if (!std::getline(in, line)) throw IoError("truncated grid CSV values: " + path);
    std::istringstream row(line);
    std::string field;
    for (int j = 0; j < grid.n_t; ++j) {
      if (!std::getline(row, field, ',')) throw IoError("short grid CSV row: " + path);
      grid.values(i, j) = std::stod(field);
    }
  }
  return grid;
}

}  // namespace hardpinn
