// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/config.hpp"

#include <set>

#include "core/errors.hpp"

namespace hardpinn {

using nlohmann::json;

namespace {

void check_keys(const json& j, const char* section, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(std::string("config section '") + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(std::string("unknown config key '") + key + "' in section '" + section + "'");
    }
  }
}

std::optional<std::array<int, 3>> parse_split(const json& j, const char* name) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string(name) + " must be a 3-element array [pde, bc, ic]");
  }
  return std::array<int, 3>{j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

json split_to_json(const std::optional<std::array<int, 3>>& split) {
  if (!split) return nullptr;
  return json::array({(*split)[0], (*split)[1], (*split)[2]});
}

StopCriterion parse_stop(const json& j, const char* section, const StopCriterion& defaults) {
  check_keys(j, section, {"g_tol", "f_tol", "l_max"});
  StopCriterion stop = defaults;
  stop.g_tol = j.value("g_tol", stop.g_tol);
  stop.f_tol = j.value("f_tol", stop.f_tol);
  stop.l_max = j.value("l_max", stop.l_max);
  return stop;
}

json stop_to_json(const StopCriterion& stop) {
  return {{"g_tol", stop.g_tol}, {"f_tol", stop.f_tol}, {"l_max", stop.l_max}};
}

}  // namespace

void RunConfig::validate() const {
  if (network.depth < 1 || network.width < 1) throw ConfigError("network depth and width must be >= 1");
  if (data.n_labeled < 1) throw ConfigError("n_labeled must be >= 1");
  if (data.noise_std < 0) throw ConfigError("noise_std must be >= 0");
  if (data.grid_nx < 2 || data.grid_nt < 2) throw ConfigError("grid sizes must be >= 2");
  if (m_train_resolved() < 1) throw ConfigError("m_train must be >= 1");
  if (data.m_pretrain < 1) throw ConfigError("m_pretrain must be >= 1");
  if (method != "pinn" && method != "penalty" && method != "alm" && method != "trsqp") {
    throw ConfigError("method must be one of pinn, penalty, alm, trsqp");
  }
  if (problem.kind == PDEKind::ReactionDiffusion) {
    if (problem.tau <= 0.0) throw ConfigError("reaction-diffusion requires tau > 0");
    if ((data.grid_nx & (data.grid_nx - 1)) != 0) {
      throw ConfigError("reaction-diffusion grids must have power-of-two n_x for the spectral reference");
    }
    if (reference.n_steps < 1) throw ConfigError("reference n_steps must be >= 1");
  }
  if (outer.rho <= 1.0) throw ConfigError("outer rho must be > 1");
  if (trsqp.radius_factor <= 1.0) throw ConfigError("trsqp radius factor must be > 1");
  if (!(trsqp.eta_low > 0.0 && trsqp.eta_low < trsqp.eta_upp && trsqp.eta_upp < 1.0)) {
    throw ConfigError("trsqp thresholds need 0 < eta_low < eta_upp < 1");
  }
  if (!(trsqp.normal_fraction > 0.0 && trsqp.normal_fraction < 1.0)) {
    throw ConfigError("trsqp normal fraction must lie in (0, 1)");
  }
  if (!(trsqp.damping > 0.0 && trsqp.damping < 1.0)) {
    throw ConfigError("trsqp damping must lie in (0, 1)");
  }
  if (sweep_workers < 1) throw ConfigError("sweep_workers must be >= 1");
}

void RunConfig::apply_desk_scale() {
  network.depth = 2;
  network.width = 20;
  data.grid_nx = 256;
  data.grid_nt = 100;
  reference.n_steps = 2000;
  trsqp.k_max = 2000;
  pretrain_stop.l_max = 5000;
  inner_stop.l_max = 200;
}

json RunConfig::to_json() const {
  json j;
  j["problem"] = {{"kind", pde_kind_name(problem.kind)}, {"beta", problem.beta},
                  {"alpha", problem.alpha},              {"tau", problem.tau},
                  {"zeta", problem.zeta}};
  j["network"] = {{"depth", network.depth}, {"width", network.width}};
  j["data"] = {{"n_labeled", data.n_labeled},
               {"noise_std", data.noise_std},
               {"m_train", m_train_resolved()},
               {"m_pretrain", data.m_pretrain},
               {"train_split", split_to_json(data.train_split)},
               {"pretrain_split", split_to_json(data.pretrain_split)},
               {"grid_nx", data.grid_nx},
               {"grid_nt", data.grid_nt}};
  j["reference"] = {{"n_steps", reference.n_steps}, {"cache", reference.cache}};
  j["method"] = method;
  j["pretrain"] = stop_to_json(pretrain_stop);
  j["pretrain"]["enabled"] = pretrain_on();
  j["inner_stop"] = stop_to_json(inner_stop);
  j["outer"] = {{"mu0", outer.mu0}, {"rho", outer.rho}, {"mu_max_exponent", outer.mu_max_exponent}};
  j["pinn"] = {{"mu", pinn_mu}};
  j["trsqp"] = {{"damping", trsqp.damping},
                {"nu", trsqp.normal_fraction},
                {"eta_low", trsqp.eta_low},
                {"eta_upp", trsqp.eta_upp},
                {"radius_factor", trsqp.radius_factor},
                {"initial_radius", trsqp.initial_radius},
                {"initial_mu", trsqp.initial_mu},
                {"k_max", trsqp.k_max},
                {"g_tol", trsqp.g_tol},
                {"f_tol", trsqp.f_tol},
                {"hessian", hessian_scheme_name(trsqp.hessian)},
                {"sr1_skip_tol", trsqp.sr1_skip_tol},
                {"pcg_tol", trsqp.pcg_tol},
                {"validate", trsqp.validate_invariants}};
  j["seeds"] = {{"params", seeds.params},
                {"labeled", seeds.labeled},
                {"train_colloc", seeds.train_colloc},
                {"pretrain_colloc", seeds.pretrain_colloc}};
  j["lbfgs_memory"] = lbfgs_memory;
  j["checkpoint_every"] = checkpoint_every;
  j["export_heatmap"] = export_heatmap;
  j["sweep_workers"] = sweep_workers;
  j["output_dir"] = output_dir;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j, "top level",
             {"problem", "network", "data", "reference", "method", "pretrain", "inner_stop",
              "outer", "pinn", "trsqp", "seeds", "lbfgs_memory", "checkpoint_every",
              "export_heatmap", "sweep_workers", "output_dir", "desk_scale"});
  RunConfig cfg;
  if (j.value("desk_scale", false)) cfg.apply_desk_scale();

  if (j.contains("problem")) {
    const json& p = j["problem"];
    check_keys(p, "problem", {"kind", "beta", "alpha", "tau", "zeta"});
    if (p.contains("kind")) cfg.problem.kind = pde_kind_from_name(p["kind"].get<std::string>());
    cfg.problem.beta = p.value("beta", cfg.problem.beta);
    cfg.problem.alpha = p.value("alpha", cfg.problem.alpha);
    cfg.problem.tau = p.value("tau", cfg.problem.tau);
    cfg.problem.zeta = p.value("zeta", cfg.problem.zeta);
  }
  if (j.contains("network")) {
    const json& n = j["network"];
    check_keys(n, "network", {"depth", "width"});
    cfg.network.depth = n.value("depth", cfg.network.depth);
    cfg.network.width = n.value("width", cfg.network.width);
  }
  if (j.contains("data")) {
    const json& d = j["data"];
    check_keys(d, "data",
               {"n_labeled", "noise_std", "m_train", "m_pretrain", "train_split",
                "pretrain_split", "grid_nx", "grid_nt"});
    cfg.data.n_labeled = d.value("n_labeled", cfg.data.n_labeled);
    cfg.data.noise_std = d.value("noise_std", cfg.data.noise_std);
    cfg.data.m_train = d.value("m_train", cfg.data.m_train);
    cfg.data.m_pretrain = d.value("m_pretrain", cfg.data.m_pretrain);
    if (d.contains("train_split")) cfg.data.train_split = parse_split(d["train_split"], "train_split");
    if (d.contains("pretrain_split")) {
      cfg.data.pretrain_split = parse_split(d["pretrain_split"], "pretrain_split");
    }
    cfg.data.grid_nx = d.value("grid_nx", cfg.data.grid_nx);
    cfg.data.grid_nt = d.value("grid_nt", cfg.data.grid_nt);
  }
  if (j.contains("reference")) {
    const json& r = j["reference"];
    check_keys(r, "reference", {"n_steps", "cache"});
    cfg.reference.n_steps = r.value("n_steps", cfg.reference.n_steps);
    cfg.reference.cache = r.value("cache", cfg.reference.cache);
  }
  cfg.method = j.value("method", cfg.method);
  if (j.contains("pretrain")) {
    const json& p = j["pretrain"];
    check_keys(p, "pretrain", {"enabled", "g_tol", "f_tol", "l_max"});
    if (p.contains("enabled")) cfg.pretrain_enabled = p["enabled"].get<bool>();
    cfg.pretrain_stop = parse_stop(json{{"g_tol", p.value("g_tol", cfg.pretrain_stop.g_tol)},
                                        {"f_tol", p.value("f_tol", cfg.pretrain_stop.f_tol)},
                                        {"l_max", p.value("l_max", cfg.pretrain_stop.l_max)}},
                                   "pretrain", cfg.pretrain_stop);
  }
  if (j.contains("inner_stop")) cfg.inner_stop = parse_stop(j["inner_stop"], "inner_stop", cfg.inner_stop);
  if (j.contains("outer")) {
    const json& o = j["outer"];
    check_keys(o, "outer", {"mu0", "rho", "mu_max_exponent"});
    cfg.outer.mu0 = o.value("mu0", cfg.outer.mu0);
    cfg.outer.rho = o.value("rho", cfg.outer.rho);
    cfg.outer.mu_max_exponent = o.value("mu_max_exponent", cfg.outer.mu_max_exponent);
  }
  if (j.contains("pinn")) {
    check_keys(j["pinn"], "pinn", {"mu"});
    cfg.pinn_mu = j["pinn"].value("mu", cfg.pinn_mu);
  }
  if (j.contains("trsqp")) {
    const json& t = j["trsqp"];
    check_keys(t, "trsqp",
               {"damping", "nu", "eta_low", "eta_upp", "radius_factor", "initial_radius",
                "initial_mu", "k_max", "g_tol", "f_tol", "hessian", "sr1_skip_tol", "pcg_tol",
                "validate"});
    cfg.trsqp.damping = t.value("damping", cfg.trsqp.damping);
    cfg.trsqp.normal_fraction = t.value("nu", cfg.trsqp.normal_fraction);
    cfg.trsqp.eta_low = t.value("eta_low", cfg.trsqp.eta_low);
    cfg.trsqp.eta_upp = t.value("eta_upp", cfg.trsqp.eta_upp);
    cfg.trsqp.radius_factor = t.value("radius_factor", cfg.trsqp.radius_factor);
    cfg.trsqp.initial_radius = t.value("initial_radius", cfg.trsqp.initial_radius);
    cfg.trsqp.initial_mu = t.value("initial_mu", cfg.trsqp.initial_mu);
    cfg.trsqp.k_max = t.value("k_max", cfg.trsqp.k_max);
    cfg.trsqp.g_tol = t.value("g_tol", cfg.trsqp.g_tol);
    cfg.trsqp.f_tol = t.value("f_tol", cfg.trsqp.f_tol);
    if (t.contains("hessian")) cfg.trsqp.hessian = hessian_scheme_from_name(t["hessian"].get<std::string>());
    cfg.trsqp.sr1_skip_tol = t.value("sr1_skip_tol", cfg.trsqp.sr1_skip_tol);
    cfg.trsqp.pcg_tol = t.value("pcg_tol", cfg.trsqp.pcg_tol);
    cfg.trsqp.validate_invariants = t.value("validate", cfg.trsqp.validate_invariants);
  }
  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    check_keys(s, "seeds", {"params", "labeled", "train_colloc", "pretrain_colloc"});
    cfg.seeds.params = s.value("params", cfg.seeds.params);
    cfg.seeds.labeled = s.value("labeled", cfg.seeds.labeled);
    cfg.seeds.train_colloc = s.value("train_colloc", cfg.seeds.train_colloc);
    cfg.seeds.pretrain_colloc = s.value("pretrain_colloc", cfg.seeds.pretrain_colloc);
  }
  cfg.lbfgs_memory = j.value("lbfgs_memory", cfg.lbfgs_memory);
  cfg.checkpoint_every = j.value("checkpoint_every", cfg.checkpoint_every);
  cfg.export_heatmap = j.value("export_heatmap", cfg.export_heatmap);
  cfg.sweep_workers = j.value("sweep_workers", cfg.sweep_workers);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  return from_json(j);
}

}  // namespace hardpinn
