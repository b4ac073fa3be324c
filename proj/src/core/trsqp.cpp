// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/trsqp.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace hardpinn {

using Eigen::LDLT;
using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* hessian_scheme_name(HessianScheme scheme) {
  switch (scheme) {
    case HessianScheme::DampedBfgs: return "damped_bfgs";
    case HessianScheme::Sr1: return "sr1";
    case HessianScheme::Identity: return "identity";
  }
  return "?";
}

HessianScheme hessian_scheme_from_name(const std::string& name) {
  if (name == "damped_bfgs" || name == "bfgs") return HessianScheme::DampedBfgs;
  if (name == "sr1") return HessianScheme::Sr1;
  if (name == "identity") return HessianScheme::Identity;
  throw ConfigError("unknown Hessian scheme: " + name);
}

const char* trsqp_termination_name(TrSqpTermination reason) {
  switch (reason) {
    case TrSqpTermination::StepTol: return "step_tol";
    case TrSqpTermination::GradientTol: return "gradient_tol";
    case TrSqpTermination::IterationLimit: return "iteration_limit";
  }
  return "?";
}

double normal_eq_epsilon(const MatrixXd& jac) {
  if (jac.rows() == 0) return 0.0;
  return 1e-10 * jac.squaredNorm() / static_cast<double>(jac.rows());
}

void damped_bfgs_update(MatrixXd& hess, const VectorXd& s, const VectorXd& y, double damping) {
  const VectorXd hs = hess * s;
  const double shs = s.dot(hs);
  if (!(shs > 0.0)) {
    throw NumericError("damped BFGS requires positive s.Hs (H lost positive definiteness)");
  }
  const double sy = s.dot(y);
  double gamma = 1.0;
  if (sy < damping * shs) gamma = (1.0 - damping) * shs / (shs - sy);
  const VectorXd r = gamma * y + (1.0 - gamma) * hs;
  const double sr = s.dot(r);
  hess.noalias() -= (hs * hs.transpose()) / shs;
  hess.noalias() += (r * r.transpose()) / sr;
  hess = 0.5 * (hess + hess.transpose()).eval();
}

void sr1_update(MatrixXd& hess, const VectorXd& s, const VectorXd& y, double skip_tol) {
  const VectorXd w = y - hess * s;
  const double ws = w.dot(s);
  if (std::abs(ws) <= skip_tol * w.norm() * s.norm()) return;  // degenerate pair (incl. w = 0)
  hess.noalias() += (w * w.transpose()) / ws;
  hess = 0.5 * (hess + hess.transpose()).eval();
}

VectorXd normal_step(const VectorXd& c, const MatrixXd& jac, double radius) {
  const Eigen::Index p = jac.cols();
  VectorXd zero = VectorXd::Zero(p);
  if (c.size() == 0 || radius <= 0.0) return zero;
  const double c_norm = c.norm();
  if (c_norm == 0.0) return zero;

  const VectorXd g = jac.transpose() * c;  // gradient of ||c + J d||^2 / 2 at 0
  const double g_norm = g.norm();
  if (g_norm == 0.0) return zero;

  // Cauchy step along -g, clipped to the radius.
  const double jg_sq = (jac * g).squaredNorm();
  VectorXd cauchy = -(g.squaredNorm() / jg_sq) * g;
  if (cauchy.norm() >= radius) return -(radius / g_norm) * g;

  // Regularized Gauss-Newton minimum-norm step.
  MatrixXd gram = jac * jac.transpose();
  gram.diagonal().array() += normal_eq_epsilon(jac);
  const VectorXd gn = -jac.transpose() * LDLT<MatrixXd>(gram).solve(c);
  if (gn.norm() <= radius) return gn;

  // Dogleg: boundary point on the segment from the Cauchy step to GN.
  const VectorXd d = gn - cauchy;
  const double a = d.squaredNorm();
  const double b = 2.0 * cauchy.dot(d);
  const double cc = cauchy.squaredNorm() - radius * radius;
  const double disc = std::max(0.0, b * b - 4.0 * a * cc);
  const double t = a > 0.0 ? (-b + std::sqrt(disc)) / (2.0 * a) : 0.0;
  return cauchy + std::min(1.0, std::max(0.0, t)) * d;
}

namespace {

// Projection onto Null(J) through the regularized normal equations, with one
// refinement pass to keep the projection error near roundoff.
struct NullSpaceProjector {
  const MatrixXd* jac = nullptr;
  LDLT<MatrixXd> ldlt;
  bool active = false;

  void init(const MatrixXd& j) {
    jac = &j;
    active = j.rows() > 0 && j.squaredNorm() > 0.0;
    if (!active) return;
    MatrixXd gram = j * j.transpose();
    gram.diagonal().array() += normal_eq_epsilon(j);
    ldlt.compute(gram);
  }

  VectorXd apply(const VectorXd& v) const {
    if (!active) return v;
    VectorXd out = v - jac->transpose() * ldlt.solve((*jac) * v);
    out -= jac->transpose() * ldlt.solve((*jac) * out);
    return out;
  }
};

// Positive root of ||x + t d|| = radius.
double boundary_t(const VectorXd& x, const VectorXd& d, double radius) {
  const double dd = d.squaredNorm();
  if (dd == 0.0) return 0.0;
  const double xd = x.dot(d);
  const double rr = radius * radius - x.squaredNorm();
  const double disc = std::max(0.0, xd * xd + dd * rr);
  return (-xd + std::sqrt(disc)) / dd;
}

double quad_model(const VectorXd& grad_l, const MatrixXd& hess, const VectorXd& d) {
  return grad_l.dot(d) + 0.5 * d.dot(hess * d);
}

}  // namespace

VectorXd tangential_step(const VectorXd& grad_l, const MatrixXd& hess, const MatrixXd& jac,
                         const VectorXd& normal, double radius, double tol, int max_iterations) {
  const Eigen::Index p = grad_l.size();
  if (max_iterations < 0) max_iterations = static_cast<int>(p);

  NullSpaceProjector projector;
  projector.init(jac);

  VectorXd x = normal;
  VectorXd r = hess * x + grad_l;
  VectorXd g = projector.apply(r);
  double rg = r.dot(g);
  const double rg0 = std::abs(rg);
  VectorXd d = -g;

  // A projected residual far smaller than the raw one is regularization
  // noise, not a usable null-space direction.
  const auto is_noise = [](const VectorXd& proj, const VectorXd& raw) {
    return proj.norm() <= 1e-8 * raw.norm();
  };

  for (int it = 0; it < max_iterations; ++it) {
    if (!(rg > tol * tol * std::max(1.0, rg0))) break;
    if (is_noise(g, r)) break;
    const VectorXd hd = hess * d;
    const double dhd = d.dot(hd);
    if (dhd <= 0.0) {
      x += boundary_t(x, d, radius) * d;  // negative curvature: stop on the boundary
      break;
    }
    const double alpha = rg / dhd;
    if ((x + alpha * d).norm() >= radius) {
      x += boundary_t(x, d, radius) * d;
      break;
    }
    x += alpha * d;
    r += alpha * hd;
    g = projector.apply(r);
    const double rg_new = r.dot(g);
    d = -g + (rg_new / rg) * d;
    rg = rg_new;
  }

  // The tangential step must not be worse than its starting point.
  if (quad_model(grad_l, hess, x) > quad_model(grad_l, hess, normal)) return normal;
  return x;
}

VectorXd least_squares_multipliers(const VectorXd& grad_l, const MatrixXd& jac) {
  const Eigen::Index m = jac.rows();
  if (m == 0) return VectorXd();
  if (jac.squaredNorm() == 0.0) return VectorXd::Zero(m);
  MatrixXd gram = jac * jac.transpose();
  gram.diagonal().array() += normal_eq_epsilon(jac);
  return LDLT<MatrixXd>(gram).solve(-(jac * grad_l));
}

double adaptive_penalty(double mu_prev, const VectorXd& grad_l, const MatrixXd& hess,
                        const VectorXd& step, const VectorXd& c, const MatrixXd& jac) {
  const double gain = c.norm() - (c + jac * step).norm();
  const double guard = 1e-12 * std::max(1.0, c.norm());
  if (gain <= guard) return mu_prev;
  const double quad = grad_l.dot(step) + 0.5 * step.dot(hess * step);
  return std::max(mu_prev, quad / (0.7 * gain));
}

// --- trainer -----------------------------------------------------------------

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

[[noreturn]] void abort_nonfinite(int k, const VectorXd& theta, double loss, double c_norm) {
  std::ostringstream msg;
  msg << "trsqp: non-finite loss or constraints at iteration " << k << " (loss " << loss
      << ", ||c|| " << c_norm << ", ||theta|| " << theta.norm() << ")";
  throw NumericError(msg.str());
}

void validate_state(const MatrixXd& hess, HessianScheme scheme) {
  const double asym = (hess - hess.transpose()).lpNorm<Eigen::Infinity>();
  if (asym > 1e-12) throw NumericError("trsqp: Hessian approximation lost symmetry");
  if (scheme == HessianScheme::DampedBfgs) {
    Eigen::LLT<MatrixXd> llt(hess);
    if (llt.info() != Eigen::Success) {
      throw NumericError("trsqp: damped BFGS Hessian is not positive definite");
    }
  }
}

}  // namespace

TrSqpResult trsqp_train(ConstrainedProblem& problem, const VectorXd& theta0,
                        const TrSqpConfig& config, const TrSqpObserver& observer) {
  const int p = problem.dim();
  TrSqpResult result;
  result.theta = theta0;

  MatrixXd hess = MatrixXd::Identity(p, p);
  double radius = config.initial_radius;
  double mu = config.initial_mu;

  VectorXd grad_l(p);
  double loss = problem.loss_grad(result.theta, grad_l);
  VectorXd c;
  MatrixXd jac;
  problem.constraints_jacobian(result.theta, c, jac);
  if (!std::isfinite(loss) || !c.allFinite()) abort_nonfinite(0, result.theta, loss, c.norm());
  result.lambda = least_squares_multipliers(grad_l, jac);

  VectorXd c_trial;
  for (int k = 0; k < config.k_max; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const double radius_used = radius;

    const VectorXd normal = normal_step(c, jac, config.normal_fraction * radius);
    const VectorXd step = tangential_step(grad_l, hess, jac, normal, radius, config.pcg_tol);

    mu = adaptive_penalty(mu, grad_l, hess, step, c, jac);
    const double pred = predicted_reduction(step, grad_l, hess, c, jac, mu);
    const double merit_here = loss + mu * c.norm();

    const VectorXd theta_trial = result.theta + step;
    const double loss_trial = problem.loss(theta_trial);
    problem.constraints(theta_trial, c_trial);
    const bool trial_finite = std::isfinite(loss_trial) && c_trial.allFinite();
    const double merit_trial = loss_trial + mu * c_trial.norm();
    const double ared = merit_here - merit_trial;
    const double eta = (trial_finite && pred > 0.0 && std::isfinite(ared))
                           ? ared / pred
                           : -std::numeric_limits<double>::infinity();

    const bool accepted = eta >= config.eta_low;
    TrSqpRecord record;
    record.k = k;
    record.accepted = accepted;
    record.eta = eta;
    record.radius = radius_used;
    record.mu = mu;
    record.loss = loss;
    record.c_norm = c.norm();
    record.merit = merit_here;
    record.step_norm = step.norm();
    record.normal_norm = normal.norm();
    record.pred = pred;
    record.ared = ared;
    record.scheme = hessian_scheme_name(config.hessian);

    result.iterations = k + 1;

    if (accepted) {
      if (eta >= config.eta_upp) radius *= config.radius_factor;
      const VectorXd theta_old = result.theta;
      const VectorXd grad_old = grad_l;
      const MatrixXd jac_old = jac;

      result.theta = theta_trial;
      loss = problem.loss_grad(result.theta, grad_l);
      problem.constraints_jacobian(result.theta, c, jac);
      if (!std::isfinite(loss) || !c.allFinite()) abort_nonfinite(k, result.theta, loss, c.norm());
      result.lambda = least_squares_multipliers(grad_l, jac);
      ++result.accepted_steps;

      if (config.hessian != HessianScheme::Identity) {
        const VectorXd s = result.theta - theta_old;
        // Lagrangian gradient difference with the fresh multipliers on both ends.
        const VectorXd y = (grad_l + jac.transpose() * result.lambda) -
                           (grad_old + jac_old.transpose() * result.lambda);
        if (s.squaredNorm() > 0.0) {
          if (config.hessian == HessianScheme::DampedBfgs) {
            damped_bfgs_update(hess, s, y, config.damping);
          } else {
            sr1_update(hess, s, y, config.sr1_skip_tol);
          }
        }
      }
    } else {
      radius /= config.radius_factor;
    }

    if (config.validate_invariants) {
      validate_state(hess, config.hessian);
      if (normal.norm() > config.normal_fraction * radius_used * (1.0 + 1e-9) + 1e-300 ||
          step.norm() > radius_used * (1.0 + 1e-9)) {
        throw NumericError("trsqp: step left the trust region");
      }
    }

    record.hess_asymmetry = (hess - hess.transpose()).lpNorm<Eigen::Infinity>();
    record.wall_s = seconds_since(t0);
    record.theta = &result.theta;
    if (observer) observer(record);

    if (!accepted) {
      // Convergence is declared on a rejected step with a negligible step or
      // a stationary Lagrangian.
      const double grad_lag_inf =
          (grad_l + jac.transpose() * result.lambda).lpNorm<Eigen::Infinity>();
      if (step.norm() <= config.f_tol) {
        result.reason = TrSqpTermination::StepTol;
        break;
      }
      if (grad_lag_inf <= config.g_tol) {
        result.reason = TrSqpTermination::GradientTol;
        break;
      }
    }
  }

  result.final_loss = loss;
  result.final_c_norm = c.norm();
  return result;
}

}  // namespace hardpinn
