// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end over the hardpinn C API. Subcommands mirror the
// pipeline: reference, pretrain, train, evaluate, export-heatmap, sweep.

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hardpinn.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct ConfigArgs {
  std::string config_path;
  bool desk_scale = false;
  json patch = json::object();
};

// One --flag per commonly swept RunConfig field; anything else comes from the
// JSON config file.
void add_config_flags(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_flag("--desk-scale", args.desk_scale, "apply the reduced desk-scale preset");

  auto set = [&args](const char* pointer) {
    return [&args, pointer](const std::string& value) {
      json parsed = json::parse(value, nullptr, false);
      if (parsed.is_discarded()) parsed = value;  // bare strings (method names, paths)
      args.patch[json::json_pointer(pointer)] = parsed;
    };
  };

  cmd->add_option_function<std::string>("--problem", set("/problem/kind"),
                                        "transport | reaction | reaction_diffusion");
  cmd->add_option_function<std::string>("--beta", set("/problem/beta"), "transport coefficient");
  cmd->add_option_function<std::string>("--alpha", set("/problem/alpha"), "reaction coefficient");
  cmd->add_option_function<std::string>("--tau", set("/problem/tau"), "diffusion coefficient");
  cmd->add_option_function<std::string>("--zeta", set("/problem/zeta"), "initial-condition coefficient");
  cmd->add_option_function<std::string>("--method", set("/method"), "pinn | penalty | alm | trsqp");
  cmd->add_option_function<std::string>("--depth", set("/network/depth"), "hidden layers");
  cmd->add_option_function<std::string>("--width", set("/network/width"), "neurons per hidden layer");
  cmd->add_option_function<std::string>("--n-labeled", set("/data/n_labeled"), "labeled sample size");
  cmd->add_option_function<std::string>("--noise-std", set("/data/noise_std"), "label noise std");
  cmd->add_option_function<std::string>("--m-train", set("/data/m_train"), "training collocation points");
  cmd->add_option_function<std::string>("--m-pretrain", set("/data/m_pretrain"),
                                        "pretraining collocation points");
  cmd->add_option_function<std::string>("--grid-nx", set("/data/grid_nx"), "evaluation grid x size");
  cmd->add_option_function<std::string>("--grid-nt", set("/data/grid_nt"), "evaluation grid t size");
  cmd->add_option_function<std::string>("--ref-steps", set("/reference/n_steps"),
                                        "reference solver time steps");
  cmd->add_option_function<std::string>("--ref-cache", set("/reference/cache"),
                                        "reference grid CSV cache path");
  cmd->add_option_function<std::string>("--hessian", set("/trsqp/hessian"),
                                        "sr1 | damped_bfgs | identity");
  cmd->add_option_function<std::string>("--k-max", set("/trsqp/k_max"), "trsqp iteration cap");
  cmd->add_option_function<std::string>("--l-max", set("/inner_stop/l_max"),
                                        "inner L-BFGS iteration cap");
  cmd->add_option_function<std::string>("--pretrain-l-max", set("/pretrain/l_max"),
                                        "pretraining L-BFGS iteration cap");
  cmd->add_option_function<std::string>("--mu", set("/pinn/mu"), "fixed PINN penalty coefficient");
  cmd->add_option_function<std::string>("--pretrain", set("/pretrain/enabled"),
                                        "true/false: pretraining toggle");
  cmd->add_option_function<std::string>("--checkpoint-every", set("/checkpoint_every"),
                                        "checkpoint cadence (trsqp)");
  cmd->add_option_function<std::string>("--export-heatmap", set("/export_heatmap"),
                                        "true/false: write heatmap.csv after training");
  cmd->add_option_function<std::string>("--workers", set("/sweep_workers"), "parallel sweep slots");
  cmd->add_option_function<std::string>("--seed", [&args](const std::string& value) {
    unsigned long long s = 0;
    try {
      s = std::stoull(value);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--seed", "expects a non-negative integer");
    }
    args.patch["seeds"] = {{"params", s}, {"labeled", s + 1}, {"train_colloc", s + 2},
                           {"pretrain_colloc", s + 3}};
  }, "base seed (derives all four stream seeds)");
}

struct ConfigHandle {
  hardpinn_config* ptr = nullptr;
  ~ConfigHandle() { hardpinn_config_free(ptr); }
};

int die(hardpinn_status status) {
  std::fprintf(stderr, "error (%s): %s\n", hardpinn_status_name(status), hardpinn_last_error());
  return 1;
}

int build_config(const ConfigArgs& args, ConfigHandle& handle) {
  hardpinn_status status = args.config_path.empty()
                               ? hardpinn_config_default(&handle.ptr)
                               : hardpinn_config_from_file(args.config_path.c_str(), &handle.ptr);
  if (status != HARDPINN_OK) return die(status);
  if (args.desk_scale) {
    status = hardpinn_config_desk_scale(handle.ptr);
    if (status != HARDPINN_OK) return die(status);
  }
  if (!args.patch.empty()) {
    status = hardpinn_config_apply_json(handle.ptr, args.patch.dump().c_str());
    if (status != HARDPINN_OK) return die(status);
  }
  return 0;
}

void print_owned(char* text) {
  if (text != nullptr) {
    std::printf("%s\n", text);
    hardpinn_string_free(text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hardpinn: hard-constrained PDE learning with small networks"};
  app.require_subcommand(1);

  ConfigArgs args;
  std::string out;
  std::string checkpoint;
  std::string overrides_path;

  auto* train = app.add_subcommand("train", "run the full pipeline for one configuration");
  add_config_flags(train, args);
  train->add_option("--out", out, "output directory");

  auto* pretrain_cmd = app.add_subcommand("pretrain", "feasibility pretraining only");
  add_config_flags(pretrain_cmd, args);
  pretrain_cmd->add_option("--out", out, "checkpoint path")->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "error report for a checkpoint");
  add_config_flags(evaluate_cmd, args);
  evaluate_cmd->add_option("--checkpoint", checkpoint, "parameter checkpoint")->required();

  auto* heatmap = app.add_subcommand("export-heatmap", "sample a checkpoint on the grid as CSV");
  add_config_flags(heatmap, args);
  heatmap->add_option("--checkpoint", checkpoint, "parameter checkpoint")->required();
  heatmap->add_option("--out", out, "output CSV path")->required();

  auto* reference_cmd = app.add_subcommand("reference", "build and cache a reference grid");
  add_config_flags(reference_cmd, args);
  reference_cmd->add_option("--out", out, "output CSV path")->required();

  auto* sweep = app.add_subcommand("sweep", "run a list of override patches");
  add_config_flags(sweep, args);
  sweep->add_option("--overrides", overrides_path, "JSON array of config patches")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  ConfigHandle cfg;
  if (int rc = build_config(args, cfg); rc != 0) return rc;

  char* text = nullptr;
  hardpinn_status status = HARDPINN_OK;
  if (train->parsed()) {
    status = hardpinn_run_experiment(cfg.ptr, out.c_str(), &text);
  } else if (pretrain_cmd->parsed()) {
    status = hardpinn_pretrain(cfg.ptr, out.c_str(), &text);
  } else if (evaluate_cmd->parsed()) {
    status = hardpinn_evaluate(cfg.ptr, checkpoint.c_str(), &text);
  } else if (heatmap->parsed()) {
    status = hardpinn_export_heatmap(cfg.ptr, checkpoint.c_str(), out.c_str());
  } else if (reference_cmd->parsed()) {
    status = hardpinn_build_reference(cfg.ptr, out.c_str());
  } else if (sweep->parsed()) {
    std::ifstream in(overrides_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    status = hardpinn_run_sweep(cfg.ptr, buffer.str().c_str(), out.c_str(), &text);
  }

  if (status != HARDPINN_OK) {
    if (text != nullptr) {
      std::fprintf(stderr, "%s\n", text);
      hardpinn_string_free(text);
    }
    return die(status);
  }
  print_owned(text);
  return 0;
}
