// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "core/tape.hpp"

namespace hardpinn {

/// Network output together with the input derivatives needed by the PDE
/// operators: value, d/dx, d/dt and d2/dx2.
struct Jet2 {
  double u = 0.0;
  double du_dx = 0.0;
  double du_dt = 0.0;
  double d2u_dx2 = 0.0;
};

inline Jet2 jet_input_x(double x) { return {x, 1.0, 0.0, 0.0}; }
inline Jet2 jet_input_t(double t) { return {t, 0.0, 1.0, 0.0}; }

/// tanh applied to a jet: propagates value, both first-order tangents and the
/// x second-order term through the activation.
inline Jet2 jet_tanh(const Jet2& a) {
  const double u = std::tanh(a.u);
  const double s = 1.0 - u * u;
  Jet2 r;
  r.u = u;
  r.du_dx = s * a.du_dx;
  r.du_dt = s * a.du_dt;
  r.d2u_dx2 = s * a.d2u_dx2 - 2.0 * u * s * a.du_dx * a.du_dx;
  return r;
}

namespace ad {

/// Tape-recorded jet: the four components are tape scalars, so a reverse
/// sweep over any scalar assembled from them yields exact parameter
/// gradients.
struct JetVar {
  Var u, du_dx, du_dt, d2u_dx2;
};

inline JetVar jet_input_x(Tape& tape, double x) {
  return {tape.constant(x), tape.constant(1.0), tape.constant(0.0), tape.constant(0.0)};
}

inline JetVar jet_input_t(Tape& tape, double t) {
  return {tape.constant(t), tape.constant(0.0), tape.constant(1.0), tape.constant(0.0)};
}

inline JetVar jet_tanh(Tape& tape, const JetVar& a) {
  JetVar r;
  r.u = tape.tanh(a.u);
  // s = 1 - tanh^2
  const Var s = tape.shift(tape.neg(tape.square(r.u)), 1.0);
  r.du_dx = tape.mul(s, a.du_dx);
  r.du_dt = tape.mul(s, a.du_dt);
  const Var us = tape.mul(r.u, s);
  const Var ax2 = tape.square(a.du_dx);
  r.d2u_dx2 = tape.sub(tape.mul(s, a.d2u_dx2), tape.scale(tape.mul(us, ax2), 2.0));
  return r;
}

}  // namespace ad
}  // namespace hardpinn
