// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#include "hardpinn.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/constrained.hpp"
#include "core/errors.hpp"
#include "core/experiment.hpp"
#include "core/outer.hpp"
#include "core/sampling.hpp"

using namespace hardpinn;

struct hardpinn_config {
  RunConfig config;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hardpinn_status fail(hardpinn_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs `fn`, translating the library's exception taxonomy to status codes.
template <typename Fn>
hardpinn_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HARDPINN_OK;
  } catch (const ConfigError& e) {
    return fail(HARDPINN_ERROR_CONFIG, e.what());
  } catch (const ShapeError& e) {
    return fail(HARDPINN_ERROR_CONFIG, e.what());
  } catch (const IoError& e) {
    return fail(HARDPINN_ERROR_IO, e.what());
  } catch (const NumericError& e) {
    return fail(HARDPINN_ERROR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(HARDPINN_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(HARDPINN_ERROR_INTERNAL, "unknown error");
  }
}

std::string require(const char* s, const char* name) {
  if (s == nullptr || *s == '\0') throw ConfigError(std::string(name) + " must be non-empty");
  return s;
}

}  // namespace

extern "C" {

const char* hardpinn_version(void) { return "1.0.0"; }

const char* hardpinn_status_name(hardpinn_status status) {
  switch (status) {
    case HARDPINN_OK: return "ok";
    case HARDPINN_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case HARDPINN_ERROR_CONFIG: return "config_error";
    case HARDPINN_ERROR_IO: return "io_error";
    case HARDPINN_ERROR_NUMERIC: return "numeric_error";
    case HARDPINN_ERROR_INTERNAL: return "internal_error";
  }
  return "?";
}

const char* hardpinn_last_error(void) { return g_last_error.c_str(); }

void hardpinn_string_free(char* s) { std::free(s); }

hardpinn_status hardpinn_config_default(hardpinn_config** out_config) {
  if (out_config == nullptr) return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "out_config is null");
  return guarded([&] { *out_config = new hardpinn_config{}; });
}

hardpinn_status hardpinn_config_from_json(const char* json_text, hardpinn_config** out_config) {
  if (json_text == nullptr || out_config == nullptr) {
    return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "json_text/out_config is null");
  }
  return guarded([&] { *out_config = new hardpinn_config{RunConfig::from_json_text(json_text)}; });
}

hardpinn_status hardpinn_config_from_file(const char* path, hardpinn_config** out_config) {
  if (path == nullptr || out_config == nullptr) {
    return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "path/out_config is null");
  }
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot open config file: ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    *out_config = new hardpinn_config{RunConfig::from_json_text(text.str())};
  });
}

hardpinn_status hardpinn_config_apply_json(hardpinn_config* config, const char* json_patch) {
  if (config == nullptr || json_patch == nullptr) {
    return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "config/json_patch is null");
  }
  return guarded([&] {
    nlohmann::json patch = nlohmann::json::parse(json_patch, nullptr, false);
    if (patch.is_discarded()) throw ConfigError("config patch is not valid JSON");
    nlohmann::json merged = config->config.to_json();
    merged.merge_patch(patch);
    config->config = RunConfig::from_json(merged);
  });
}

hardpinn_status hardpinn_config_desk_scale(hardpinn_config* config) {
  if (config == nullptr) return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "config is null");
  return guarded([&] { config->config.apply_desk_scale(); });
}

hardpinn_status hardpinn_config_to_json(const hardpinn_config* config, char** out_json) {
  if (config == nullptr || out_json == nullptr) {
    return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "config/out_json is null");
  }
  return guarded([&] { *out_json = dup_string(config->config.to_json().dump(2)); });
}

void hardpinn_config_free(hardpinn_config* config) { delete config; }

hardpinn_status hardpinn_run_experiment(const hardpinn_config* config, const char* output_dir,
                                        char** out_summary_json) {
  if (config == nullptr) return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "config is null");
  return guarded([&] {
    nlohmann::json summary =
        run_experiment(config->config, output_dir != nullptr ? output_dir : "");
    if (out_summary_json != nullptr) *out_summary_json = dup_string(summary.dump(2));
  });
}

hardpinn_status hardpinn_run_sweep(const hardpinn_config* base, const char* overrides_json_array,
                                   const char* output_dir, char** out_summary_json) {
  if (base == nullptr) return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "base config is null");
  return guarded([&] {
    std::vector<nlohmann::json> overrides;
    if (overrides_json_array != nullptr && *overrides_json_array != '\0') {
      nlohmann::json arr = nlohmann::json::parse(overrides_json_array, nullptr, false);
      if (arr.is_discarded() || !arr.is_array()) {
        throw ConfigError("sweep overrides must be a JSON array of objects");
      }
      for (auto& item : arr) overrides.push_back(item);
    }
    nlohmann::json summary =
        run_sweep(base->config, overrides, output_dir != nullptr ? output_dir : "");
    if (summary.value("failed", false)) {
      if (out_summary_json != nullptr) *out_summary_json = dup_string(summary.dump(2));
      throw NumericError("one or more sweep runs failed; see the sweep summary");
    }
    if (out_summary_json != nullptr) *out_summary_json = dup_string(summary.dump(2));
  });
}

hardpinn_status hardpinn_pretrain(const hardpinn_config* config, const char* checkpoint_path,
                                  char** out_report_json) {
  if (config == nullptr) return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "config is null");
  return guarded([&] {
    const std::string path = require(checkpoint_path, "checkpoint_path");
    const RunConfig& cfg = config->config;
    cfg.validate();
    ReferenceGrid reference = resolve_reference(cfg);
    const LabeledSet labeled =
        sample_labeled(cfg.problem, reference.n_x > 0 ? &reference : nullptr, cfg.data.n_labeled,
                       cfg.data.noise_std, cfg.seeds.labeled);
    const CollocationSet colloc = sample_collocation(cfg.data.m_pretrain, cfg.data.pretrain_split,
                                                     cfg.seeds.pretrain_colloc);
    PinnProblem problem(cfg.network, cfg.problem, labeled, colloc);
    ParameterVector theta = init_params(cfg.network, cfg.seeds.params);
    const double before = problem.feasibility_sq(theta, nullptr);
    LbfgsResult result = pretrain(problem, theta, LbfgsOptions{cfg.pretrain_stop, cfg.lbfgs_memory});
    save_params(path, cfg.network, result.x);
    if (out_report_json != nullptr) {
      nlohmann::json report = {{"iterations", result.iterations},
                               {"feasibility_sq_before", before},
                               {"feasibility_sq_after", result.f},
                               {"status", lbfgs_status_name(result.status)},
                               {"checkpoint", path}};
      *out_report_json = dup_string(report.dump(2));
    }
  });
}

hardpinn_status hardpinn_evaluate(const hardpinn_config* config, const char* checkpoint_path,
                                  char** out_report_json) {
  if (config == nullptr) return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "config is null");
  return guarded([&] {
    const std::string path = require(checkpoint_path, "checkpoint_path");
    const RunConfig& cfg = config->config;
    MLPArchitecture arch;
    ParameterVector theta = load_params(path, arch);
    if (!(arch == cfg.network)) {
      throw ConfigError("checkpoint architecture does not match the configuration");
    }
    ReferenceGrid reference = resolve_reference(cfg);
    const ErrorReport report =
        evaluate(cfg.network, theta, cfg.problem, cfg.data.grid_nx, cfg.data.grid_nt,
                 reference.n_x > 0 ? &reference : nullptr);
    if (out_report_json != nullptr) {
      nlohmann::json j = {{"abs_err", report.abs_err}, {"rel_err", report.rel_err},
                          {"rel_l2", report.rel_l2},   {"grid_nx", report.grid_nx},
                          {"grid_nt", report.grid_nt}, {"checkpoint", path}};
      *out_report_json = dup_string(j.dump(2));
    }
  });
}

hardpinn_status hardpinn_export_heatmap(const hardpinn_config* config, const char* checkpoint_path,
                                        const char* csv_path) {
  if (config == nullptr) return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "config is null");
  return guarded([&] {
    const std::string in_path = require(checkpoint_path, "checkpoint_path");
    const std::string out_path = require(csv_path, "csv_path");
    const RunConfig& cfg = config->config;
    MLPArchitecture arch;
    ParameterVector theta = load_params(in_path, arch);
    if (!(arch == cfg.network)) {
      throw ConfigError("checkpoint architecture does not match the configuration");
    }
    export_heatmap(cfg.network, theta, cfg.problem, cfg.data.grid_nx, cfg.data.grid_nt, out_path);
  });
}

hardpinn_status hardpinn_build_reference(const hardpinn_config* config, const char* csv_path) {
  if (config == nullptr) return fail(HARDPINN_ERROR_INVALID_ARGUMENT, "config is null");
  return guarded([&] {
    const std::string path = require(csv_path, "csv_path");
    const RunConfig& cfg = config->config;
    if (cfg.problem.kind != PDEKind::ReactionDiffusion) {
      throw ConfigError("reference grids are built for the reaction-diffusion problem only");
    }
    ReferenceGrid grid =
        reference_solve(cfg.problem, cfg.data.grid_nx, cfg.reference.n_steps, cfg.data.grid_nt);
    grid.save_csv(path);
  });
}

}  // extern "C"
