// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/network.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "json.hpp"

namespace hardpinn {

namespace {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

Map<const MatrixXd> weights(const MLPArchitecture& a, const ParameterVector& th, int l) {
  return {th.data() + a.layer_offset(l), a.layer_out(l), a.layer_in(l)};
}

Map<const VectorXd> biases(const MLPArchitecture& a, const ParameterVector& th, int l) {
  return {th.data() + a.layer_offset(l) + a.layer_out(l) * a.layer_in(l), a.layer_out(l)};
}

Map<MatrixXd> weights_mut(const MLPArchitecture& a, VectorXd& g, int l) {
  return {g.data() + a.layer_offset(l), a.layer_out(l), a.layer_in(l)};
}

Map<VectorXd> biases_mut(const MLPArchitecture& a, VectorXd& g, int l) {
  return {g.data() + a.layer_offset(l) + a.layer_out(l) * a.layer_in(l), a.layer_out(l)};
}

}  // namespace

int MLPArchitecture::layer_offset(int l) const {
  int off = 0;
  for (int i = 0; i < l; ++i) off += layer_out(i) * (layer_in(i) + 1);
  return off;
}

int MLPArchitecture::param_count() const { return layer_offset(layer_count()); }

void check_shape(const MLPArchitecture& arch, const ParameterVector& theta) {
  if (arch.depth < 1 || arch.width < 1) {
    std::ostringstream msg;
    msg << "invalid architecture: depth " << arch.depth << ", width " << arch.width;
    throw ConfigError(msg.str());
  }
  if (theta.size() != arch.param_count()) {
    std::ostringstream msg;
    msg << "parameter vector has length " << theta.size() << " but architecture (depth "
        << arch.depth << ", width " << arch.width << ") requires " << arch.param_count();
    throw ShapeError(msg.str());
  }
}

ParameterVector init_params(const MLPArchitecture& arch, std::uint64_t seed) {
  if (arch.depth < 1 || arch.width < 1) throw ConfigError("invalid architecture");
  ParameterVector theta = ParameterVector::Zero(arch.param_count());
  Rng rng(seed);
  for (int l = 0; l < arch.layer_count(); ++l) {
    const int fan_in = arch.layer_in(l);
    const int fan_out = arch.layer_out(l);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    double* w = theta.data() + arch.layer_offset(l);
    for (int i = 0; i < fan_in * fan_out; ++i) w[i] = rng.uniform(-bound, bound);
    // biases stay zero
  }
  return theta;
}

double forward_value(const MLPArchitecture& arch, const ParameterVector& theta, double x, double t) {
  check_shape(arch, theta);
  VectorXd h(2);
  h << x, t;
  for (int l = 0; l < arch.layer_count(); ++l) {
    VectorXd z = weights(arch, theta, l) * h + biases(arch, theta, l);
    if (l < arch.depth) z = z.array().tanh();
    h = std::move(z);
  }
  return h[0];
}

Jet2 eval_jet(const MLPArchitecture& arch, const ParameterVector& theta, double x, double t) {
  check_shape(arch, theta);
  VectorXd u(2), ux(2), ut(2), uxx(2);
  u << x, t;
  ux << 1.0, 0.0;
  ut << 0.0, 1.0;
  uxx.setZero();
  for (int l = 0; l < arch.layer_count(); ++l) {
    const auto W = weights(arch, theta, l);
    VectorXd zu = W * u + biases(arch, theta, l);
    VectorXd zx = W * ux;
    VectorXd zt = W * ut;
    VectorXd zxx = W * uxx;
    if (l < arch.depth) {
      VectorXd hu = zu.array().tanh();
      VectorXd s = 1.0 - hu.array().square();
      u = hu;
      ux = s.array() * zx.array();
      ut = s.array() * zt.array();
      uxx = s.array() * zxx.array() - 2.0 * hu.array() * s.array() * zx.array().square();
    } else {
      u = std::move(zu);
      ux = std::move(zx);
      ut = std::move(zt);
      uxx = std::move(zxx);
    }
  }
  return {u[0], ux[0], ut[0], uxx[0]};
}

// --- tape forwards ----------------------------------------------------------

namespace {

// z_j = sum_i W_ji h_i + b_j recorded as scalar ops. Weight leaves are read
// column-major to match the flat layout.
std::vector<ad::Var> tape_linear(ad::Tape& tape, const MLPArchitecture& arch, int l,
                                 const std::vector<ad::Var>& h, bool with_bias) {
  const int in = arch.layer_in(l);
  const int out = arch.layer_out(l);
  const int w0 = arch.layer_offset(l);
  const int b0 = w0 + out * in;
  std::vector<ad::Var> z(static_cast<std::size_t>(out));
  for (int j = 0; j < out; ++j) {
    ad::Var acc = with_bias ? tape.param(b0 + j) : tape.constant(0.0);
    for (int i = 0; i < in; ++i) {
      acc = tape.add(acc, tape.mul(tape.param(w0 + i * out + j), h[static_cast<std::size_t>(i)]));
    }
    z[static_cast<std::size_t>(j)] = acc;
  }
  return z;
}

}  // namespace

ad::Var forward_value_tape(ad::Tape& tape, const MLPArchitecture& arch, double x, double t) {
  std::vector<ad::Var> h{tape.constant(x), tape.constant(t)};
  for (int l = 0; l < arch.layer_count(); ++l) {
    std::vector<ad::Var> z = tape_linear(tape, arch, l, h, true);
    if (l < arch.depth) {
      for (auto& v : z) v = tape.tanh(v);
    }
    h = std::move(z);
  }
  return h[0];
}

ad::JetVar forward_jet_tape(ad::Tape& tape, const MLPArchitecture& arch, double x, double t) {
  std::vector<ad::Var> u{tape.constant(x), tape.constant(t)};
  std::vector<ad::Var> ux{tape.constant(1.0), tape.constant(0.0)};
  std::vector<ad::Var> ut{tape.constant(0.0), tape.constant(1.0)};
  std::vector<ad::Var> uxx{tape.constant(0.0), tape.constant(0.0)};
  for (int l = 0; l < arch.layer_count(); ++l) {
    std::vector<ad::Var> zu = tape_linear(tape, arch, l, u, true);
    std::vector<ad::Var> zx = tape_linear(tape, arch, l, ux, false);
    std::vector<ad::Var> zt = tape_linear(tape, arch, l, ut, false);
    std::vector<ad::Var> zxx = tape_linear(tape, arch, l, uxx, false);
    if (l < arch.depth) {
      for (std::size_t j = 0; j < zu.size(); ++j) {
        const ad::JetVar hj = ad::jet_tanh(tape, {zu[j], zx[j], zt[j], zxx[j]});
        zu[j] = hj.u;
        zx[j] = hj.du_dx;
        zt[j] = hj.du_dt;
        zxx[j] = hj.d2u_dx2;
      }
    }
    u = std::move(zu);
    ux = std::move(zx);
    ut = std::move(zt);
    uxx = std::move(zxx);
  }
  return {u[0], ux[0], ut[0], uxx[0]};
}

// --- batched forwards/backprops ---------------------------------------------

void forward_values(const MLPArchitecture& arch, const ParameterVector& theta,
                    const Eigen::Matrix2Xd& xt, ValueBatch& batch) {
  check_shape(arch, theta);
  batch.h.resize(static_cast<std::size_t>(arch.layer_count()));
  batch.h[0] = xt;
  for (int l = 0; l < arch.depth; ++l) {
    MatrixXd z = weights(arch, theta, l) * batch.h[static_cast<std::size_t>(l)];
    z.colwise() += biases(arch, theta, l);
    batch.h[static_cast<std::size_t>(l) + 1] = z.array().tanh();
  }
  const int last = arch.depth;
  batch.out = (weights(arch, theta, last) * batch.h[static_cast<std::size_t>(last)]).row(0);
  batch.out.array() += biases(arch, theta, last)[0];
}

void backward_values(const MLPArchitecture& arch, const ParameterVector& theta,
                     const ValueBatch& batch, const Eigen::RowVectorXd& seed,
                     Eigen::VectorXd& grad) {
  const int last = arch.depth;
  // output layer
  weights_mut(arch, grad, last).noalias() += seed * batch.h[static_cast<std::size_t>(last)].transpose();
  biases_mut(arch, grad, last)[0] += seed.sum();
  MatrixXd adj = weights(arch, theta, last).transpose() * seed;  // width x n
  for (int l = arch.depth - 1; l >= 0; --l) {
    const MatrixXd& act = batch.h[static_cast<std::size_t>(l) + 1];
    adj.array() *= 1.0 - act.array().square();  // through tanh
    weights_mut(arch, grad, l).noalias() += adj * batch.h[static_cast<std::size_t>(l)].transpose();
    biases_mut(arch, grad, l).noalias() += adj.rowwise().sum();
    if (l > 0) adj = weights(arch, theta, l).transpose() * adj;
  }
}

void forward_jets(const MLPArchitecture& arch, const ParameterVector& theta,
                  const Eigen::Matrix2Xd& xt, JetBatch& batch) {
  check_shape(arch, theta);
  const Eigen::Index n = xt.cols();
  batch.h.resize(static_cast<std::size_t>(arch.layer_count()));
  batch.z.resize(static_cast<std::size_t>(arch.depth));
  JetChannels& h0 = batch.h[0];
  h0.u = xt;
  h0.ux = MatrixXd::Zero(2, n);
  h0.ux.row(0).setOnes();
  h0.ut = MatrixXd::Zero(2, n);
  h0.ut.row(1).setOnes();
  h0.uxx = MatrixXd::Zero(2, n);
  for (int l = 0; l < arch.depth; ++l) {
    const auto W = weights(arch, theta, l);
    const JetChannels& prev = batch.h[static_cast<std::size_t>(l)];
    JetChannels& z = batch.z[static_cast<std::size_t>(l)];
    z.u.noalias() = W * prev.u;
    z.u.colwise() += biases(arch, theta, l);
    z.ux.noalias() = W * prev.ux;
    z.ut.noalias() = W * prev.ut;
    z.uxx.noalias() = W * prev.uxx;
    JetChannels& h = batch.h[static_cast<std::size_t>(l) + 1];
    h.u = z.u.array().tanh();
    const auto s = 1.0 - h.u.array().square();
    h.ux = s * z.ux.array();
    h.ut = s * z.ut.array();
    h.uxx = s * z.uxx.array() - 2.0 * h.u.array() * s * z.ux.array().square();
  }
  const int last = arch.depth;
  const auto W = weights(arch, theta, last);
  const JetChannels& prev = batch.h[static_cast<std::size_t>(last)];
  batch.out.u.noalias() = W * prev.u;
  batch.out.u.array() += biases(arch, theta, last)[0];
  batch.out.ux.noalias() = W * prev.ux;
  batch.out.ut.noalias() = W * prev.ut;
  batch.out.uxx.noalias() = W * prev.uxx;
}

void backward_jets(const MLPArchitecture& arch, const ParameterVector& theta,
                   const JetBatch& batch, const JetChannels& seed, Eigen::VectorXd& grad) {
  const int last = arch.depth;
  const JetChannels& hl = batch.h[static_cast<std::size_t>(last)];
  {
    auto Wg = weights_mut(arch, grad, last);
    Wg.noalias() += seed.u * hl.u.transpose();
    Wg.noalias() += seed.ux * hl.ux.transpose();
    Wg.noalias() += seed.ut * hl.ut.transpose();
    Wg.noalias() += seed.uxx * hl.uxx.transpose();
    biases_mut(arch, grad, last)[0] += seed.u.sum();
  }
  const auto Wl = weights(arch, theta, last);
  JetChannels adj;
  adj.u = Wl.transpose() * seed.u;
  adj.ux = Wl.transpose() * seed.ux;
  adj.ut = Wl.transpose() * seed.ut;
  adj.uxx = Wl.transpose() * seed.uxx;
  for (int l = arch.depth - 1; l >= 0; --l) {
    const JetChannels& h = batch.h[static_cast<std::size_t>(l) + 1];
    const JetChannels& z = batch.z[static_cast<std::size_t>(l)];
    const auto hu = h.u.array();
    const auto s = 1.0 - hu.square();
    // reverse of the tanh jet rules
    JetChannels b;
    b.u = adj.u.array() * s -
          2.0 * hu * s * (adj.ux.array() * z.ux.array() + adj.ut.array() * z.ut.array() +
                          adj.uxx.array() * z.uxx.array()) -
          2.0 * adj.uxx.array() * z.ux.array().square() * s * (s - 2.0 * hu.square());
    b.ux = adj.ux.array() * s - 4.0 * adj.uxx.array() * hu * s * z.ux.array();
    b.ut = adj.ut.array() * s;
    b.uxx = adj.uxx.array() * s;
    const JetChannels& prev = batch.h[static_cast<std::size_t>(l)];
    {
      auto Wg = weights_mut(arch, grad, l);
      Wg.noalias() += b.u * prev.u.transpose();
      Wg.noalias() += b.ux * prev.ux.transpose();
      Wg.noalias() += b.ut * prev.ut.transpose();
      Wg.noalias() += b.uxx * prev.uxx.transpose();
      biases_mut(arch, grad, l).noalias() += b.u.rowwise().sum();
    }
    if (l > 0) {
      const auto W = weights(arch, theta, l);
      adj.u = W.transpose() * b.u;
      adj.ux = W.transpose() * b.ux;
      adj.ut = W.transpose() * b.ut;
      adj.uxx = W.transpose() * b.uxx;
    }
  }
}

// --- checkpoints -------------------------------------------------------------

void save_params(const std::string& path, const MLPArchitecture& arch, const ParameterVector& theta) {
  check_shape(arch, theta);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  nlohmann::json header = {
      {"format", "hardpinn-params"}, {"version", 1},
      {"depth", arch.depth},         {"width", arch.width},
      {"input_dim", 2},              {"output_dim", 1},
      {"param_count", theta.size()}, {"payload", "f64le"},
  };
  out << header.dump() << "\n";
  out.write(reinterpret_cast<const char*>(theta.data()),
            static_cast<std::streamsize>(theta.size() * sizeof(double)));
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

ParameterVector load_params(const std::string& path, MLPArchitecture& arch_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("truncated checkpoint header: " + path);
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "hardpinn-params") {
    throw IoError("not a hardpinn checkpoint: " + path);
  }
  if (header.value("version", 0) != 1) throw IoError("unsupported checkpoint version: " + path);
  arch_out.depth = header.value("depth", 0);
  arch_out.width = header.value("width", 0);
  const auto count = header.value("param_count", Eigen::Index{0});
  if (arch_out.depth < 1 || arch_out.width < 1 || count != arch_out.param_count()) {
    throw IoError("checkpoint header inconsistent with its architecture: " + path);
  }
  ParameterVector theta(count);
  in.read(reinterpret_cast<char*>(theta.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
    throw IoError("truncated checkpoint payload: " + path);
  }
  return theta;
}

}  // namespace hardpinn
