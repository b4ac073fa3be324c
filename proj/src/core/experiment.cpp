// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "core/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "core/constrained.hpp"
#include "core/errors.hpp"
#include "core/sampling.hpp"

namespace hardpinn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path) : out_(path) {
    if (!out_) throw IoError("cannot open log for writing: " + path);
  }
  void write(const json& record) { out_ << record.dump() << "\n"; }

 private:
  std::ofstream out_;
};

json error_to_json(const ErrorReport& report) {
  return {{"abs_err", report.abs_err},
          {"rel_err", report.rel_err},
          {"rel_l2", report.rel_l2},
          {"grid_nx", report.grid_nx},
          {"grid_nt", report.grid_nt}};
}

bool grid_matches(const ReferenceGrid& grid, const RunConfig& config) {
  const PDEProblem& p = config.problem;
  const PDEProblem& g = grid.problem;
  return grid.n_x == config.data.grid_nx && grid.n_t == config.data.grid_nt &&
         g.kind == p.kind && g.alpha == p.alpha && g.tau == p.tau && g.zeta == p.zeta;
}

}  // namespace

ReferenceGrid resolve_reference(const RunConfig& config) {
  if (config.problem.kind != PDEKind::ReactionDiffusion) return {};
  if (!config.reference.cache.empty() && fs::exists(config.reference.cache)) {
    ReferenceGrid grid = ReferenceGrid::load_csv(config.reference.cache);
    if (!grid_matches(grid, config)) {
      throw ConfigError("cached reference grid does not match the configured problem/grid: " +
                        config.reference.cache);
    }
    return grid;
  }
  ReferenceGrid grid = reference_solve(config.problem, config.data.grid_nx, config.reference.n_steps,
                                       config.data.grid_nt);
  if (!config.reference.cache.empty()) grid.save_csv(config.reference.cache);
  return grid;
}

std::string resolve_output_dir(const RunConfig& config, const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (!config.output_dir.empty()) return config.output_dir;
  const char* root = std::getenv(kOutputRootEnv);
  const auto stamp = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
  char name[128];
  std::snprintf(name, sizeof(name), "%s-%s-%lld", config.method.c_str(),
                pde_kind_name(config.problem.kind), static_cast<long long>(stamp));
  return (fs::path(root != nullptr ? root : "runs") / name).string();
}

json run_experiment(const RunConfig& config, const std::string& output_dir) {
  config.validate();
  const auto t_total = std::chrono::steady_clock::now();
  const fs::path dir = resolve_output_dir(config, output_dir);
  fs::create_directories(dir);

  json summary;
  summary["config"] = config.to_json();
  summary["method"] = config.method;
  summary["problem"] = config.to_json()["problem"];
  summary["output_dir"] = dir.string();

  std::ofstream config_out(dir / "config.json");
  config_out << config.to_json().dump(2) << "\n";
  config_out.close();

  // data
  auto t0 = std::chrono::steady_clock::now();
  ReferenceGrid reference = resolve_reference(config);
  const bool has_reference = reference.n_x > 0;
  summary["timings"]["reference_s"] = seconds_since(t0);

  const LabeledSet labeled =
      sample_labeled(config.problem, has_reference ? &reference : nullptr, config.data.n_labeled,
                     config.data.noise_std, config.seeds.labeled);
  const CollocationSet colloc_train = sample_collocation(
      config.m_train_resolved(), config.data.train_split, config.seeds.train_colloc);
  export_labeled_csv((dir / "labeled.csv").string(), labeled);
  export_collocation_csv((dir / "collocation.csv").string(), colloc_train);

  PinnProblem problem(config.network, config.problem, labeled, colloc_train);

  // init + optional pretraining
  ParameterVector theta = init_params(config.network, config.seeds.params);
  t0 = std::chrono::steady_clock::now();
  if (config.pretrain_on()) {
    const CollocationSet colloc_pre = sample_collocation(
        config.data.m_pretrain, config.data.pretrain_split, config.seeds.pretrain_colloc);
    PinnProblem pre_problem(config.network, config.problem, labeled, colloc_pre);
    LbfgsOptions options{config.pretrain_stop, config.lbfgs_memory};
    const double before = pre_problem.feasibility_sq(theta, nullptr);
    LbfgsResult result = pretrain(pre_problem, theta, options);
    theta = std::move(result.x);
    summary["pretrain"] = {{"enabled", true},
                           {"iterations", result.iterations},
                           {"feasibility_sq_before", before},
                           {"feasibility_sq_after", result.f},
                           {"status", lbfgs_status_name(result.status)}};
  } else {
    summary["pretrain"] = {{"enabled", false}};
  }
  summary["timings"]["pretrain_s"] = seconds_since(t0);
  save_params((dir / "theta_init.ckpt").string(), config.network, theta);

  // train
  t0 = std::chrono::steady_clock::now();
  JsonlWriter log((dir / "iterations.jsonl").string());
  json train_info;
  if (config.method == "trsqp") {
    const std::string ckpt_pattern = (dir / "checkpoint_%06d.ckpt").string();
    TrSqpObserver observer = [&](const TrSqpRecord& r) {
      log.write({{"k", r.k},
                 {"accepted", r.accepted},
                 {"eta", r.eta},
                 {"radius", r.radius},
                 {"mu", r.mu},
                 {"loss", r.loss},
                 {"c_norm", r.c_norm},
                 {"merit", r.merit},
                 {"step_norm", r.step_norm},
                 {"hessian_scheme", r.scheme},
                 {"wall_s", r.wall_s}});
      if (config.checkpoint_every > 0 && (r.k + 1) % config.checkpoint_every == 0) {
        char path[512];
        std::snprintf(path, sizeof(path), ckpt_pattern.c_str(), r.k + 1);
        save_params(path, config.network, *r.theta);
      }
    };
    TrSqpResult result = trsqp_train(problem, theta, config.trsqp, observer);
    theta = std::move(result.theta);
    train_info = {{"iterations", result.iterations},
                  {"accepted_steps", result.accepted_steps},
                  {"termination", trsqp_termination_name(result.reason)},
                  {"final_loss", result.final_loss},
                  {"final_c_norm", result.final_c_norm}};
  } else if (config.method == "pinn") {
    LbfgsOptions options{config.inner_stop, config.lbfgs_memory};
    LbfgsResult result = pinn_train(problem, config.pinn_mu, theta, options);
    theta = std::move(result.x);
    Eigen::VectorXd c;
    problem.constraints(theta, c);
    log.write({{"k", 0},
               {"mu", config.pinn_mu},
               {"inner_iters", result.iterations},
               {"loss", problem.loss(theta)},
               {"c_norm", c.norm()},
               {"merit", problem.loss(theta) + config.pinn_mu * c.norm()},
               {"wall_s", seconds_since(t0)}});
    train_info = {{"iterations", result.iterations},
                  {"status", lbfgs_status_name(result.status)},
                  {"final_loss", problem.loss(theta)},
                  {"final_c_norm", c.norm()}};
  } else {
    LbfgsOptions options{config.inner_stop, config.lbfgs_memory};
    OuterLogger outer_log = [&](const OuterRecord& r) {
      log.write({{"k", r.k},
                 {"mu", r.mu},
                 {"inner_iters", r.inner_iterations},
                 {"loss", r.loss},
                 {"c_norm", r.c_norm},
                 {"merit", r.merit},
                 {"wall_s", r.wall_s}});
    };
    OuterResult result = config.method == "penalty"
                             ? penalty_train(problem, theta, config.outer, options, outer_log)
                             : alm_train(problem, theta, config.outer, options, outer_log);
    theta = std::move(result.theta);
    Eigen::VectorXd c;
    problem.constraints(theta, c);
    train_info = {{"outer_iterations", result.outer_iterations},
                  {"inner_iterations", result.inner_iterations_total},
                  {"final_loss", problem.loss(theta)},
                  {"final_c_norm", c.norm()}};
  }
  summary["train"] = train_info;
  summary["timings"]["train_s"] = seconds_since(t0);
  save_params((dir / "theta_final.ckpt").string(), config.network, theta);

  // evaluate
  t0 = std::chrono::steady_clock::now();
  const ErrorReport report = evaluate(config.network, theta, config.problem, config.data.grid_nx,
                                      config.data.grid_nt, has_reference ? &reference : nullptr);
  summary["error"] = error_to_json(report);
  summary["timings"]["evaluate_s"] = seconds_since(t0);

  if (config.export_heatmap) {
    export_heatmap(config.network, theta, config.problem, config.data.grid_nx, config.data.grid_nt,
                   (dir / "heatmap.csv").string());
  }

  summary["seeds"] = config.to_json()["seeds"];
  summary["timings"]["total_s"] = seconds_since(t_total);

  std::ofstream summary_out(dir / "summary.json");
  summary_out << summary.dump(2) << "\n";
  if (!summary_out) throw IoError("failed writing summary.json");
  return summary;
}

namespace {

std::string coefficient_string(const PDEProblem& problem) {
  char buf[128];
  switch (problem.kind) {
    case PDEKind::Transport:
      std::snprintf(buf, sizeof(buf), "beta=%g", problem.beta);
      break;
    case PDEKind::Reaction:
      std::snprintf(buf, sizeof(buf), "alpha=%g zeta=%g", problem.alpha, problem.zeta);
      break;
    case PDEKind::ReactionDiffusion:
      std::snprintf(buf, sizeof(buf), "alpha=%g tau=%g zeta=%g", problem.alpha, problem.tau,
                    problem.zeta);
      break;
  }
  return buf;
}

}  // namespace

json run_sweep(const RunConfig& base, const std::vector<json>& overrides,
               const std::string& output_dir) {
  const fs::path dir = resolve_output_dir(base, output_dir);
  fs::create_directories(dir);
  const json base_json = base.to_json();

  struct Row {
    RunConfig config;
    json summary;
    std::string error;
  };
  std::vector<Row> rows(overrides.empty() ? 1 : overrides.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) {
      char sub[32];
      std::snprintf(sub, sizeof(sub), "run_%03zu", i);
      try {
        json merged = base_json;
        if (!overrides.empty()) merged.merge_patch(overrides[i]);
        merged.erase("output_dir");
        rows[i].config = RunConfig::from_json(merged);
        rows[i].summary = run_experiment(rows[i].config, (dir / sub).string());
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };

  const int workers = std::max(1, std::min<int>(base.sweep_workers, static_cast<int>(rows.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ofstream csv(dir / "summary.csv");
  csv << "problem,coefficients,method,abs_err,rel_err,rel_l2,wall_time,seed\n";
  json result;
  result["runs"] = json::array();
  bool any_failed = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].error.empty()) {
      any_failed = true;
      result["runs"].push_back({{"index", i}, {"error", rows[i].error}});
      continue;
    }
    const json& s = rows[i].summary;
    char line[512];
    std::snprintf(line, sizeof(line), "%s,%s,%s,%.17g,%.17g,%.17g,%.6g,%llu\n",
                  pde_kind_name(rows[i].config.problem.kind),
                  coefficient_string(rows[i].config.problem).c_str(),
                  rows[i].config.method.c_str(), s["error"]["abs_err"].get<double>(),
                  s["error"]["rel_err"].get<double>(), s["error"]["rel_l2"].get<double>(),
                  s["timings"]["total_s"].get<double>(),
                  static_cast<unsigned long long>(rows[i].config.seeds.params));
    csv << line;
    result["runs"].push_back(s);
  }
  if (!csv) throw IoError("failed writing sweep summary.csv");
  result["output_dir"] = dir.string();
  result["failed"] = any_failed;
  return result;
}

}  // namespace hardpinn
