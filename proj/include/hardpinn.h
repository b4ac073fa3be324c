/* Copyright 2026 the hardpinn authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the hardpinn shared library: PDE-solution learning with small
 * tanh networks under hard collocation constraints (trust-region SQP
 * trainer plus PINN / penalty / augmented Lagrangian baselines).
 *
 * All functions return hardpinn_status; on failure hardpinn_last_error()
 * carries a human-readable message (thread-local, valid until the next API
 * call on the same thread). Strings returned through char** are owned by the
 * caller and must be released with hardpinn_string_free().
 */

#ifndef HARDPINN_H
#define HARDPINN_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hardpinn_status {
  HARDPINN_OK = 0,
  HARDPINN_ERROR_INVALID_ARGUMENT = 1,
  HARDPINN_ERROR_CONFIG = 2,
  HARDPINN_ERROR_IO = 3,
  HARDPINN_ERROR_NUMERIC = 4,
  HARDPINN_ERROR_INTERNAL = 5
} hardpinn_status;

const char* hardpinn_version(void);
const char* hardpinn_status_name(hardpinn_status status);
const char* hardpinn_last_error(void);
void hardpinn_string_free(char* s);

/* Opaque run configuration. */
typedef struct hardpinn_config hardpinn_config;

/* Default (full-scale) configuration. */
hardpinn_status hardpinn_config_default(hardpinn_config** out_config);
/* Configuration from a JSON document (strict keys). */
hardpinn_status hardpinn_config_from_json(const char* json_text, hardpinn_config** out_config);
hardpinn_status hardpinn_config_from_file(const char* path, hardpinn_config** out_config);
/* RFC 7386 merge of a JSON patch into an existing configuration. */
hardpinn_status hardpinn_config_apply_json(hardpinn_config* config, const char* json_patch);
/* Reduced preset (small network, coarse grids, bounded iteration budgets). */
hardpinn_status hardpinn_config_desk_scale(hardpinn_config* config);
hardpinn_status hardpinn_config_to_json(const hardpinn_config* config, char** out_json);
void hardpinn_config_free(hardpinn_config* config);

/* Full pipeline: sample -> (pretrain) -> train -> evaluate -> artifacts under
 * output_dir (pass NULL/"" to derive one from the config and
 * HARDPINN_OUTPUT_ROOT). out_summary_json is optional. */
hardpinn_status hardpinn_run_experiment(const hardpinn_config* config, const char* output_dir,
                                        char** out_summary_json);

/* One run per entry of a JSON array of override patches; writes summary.csv.
 */
hardpinn_status hardpinn_run_sweep(const hardpinn_config* base, const char* overrides_json_array,
                                   const char* output_dir, char** out_summary_json);

/* Feasibility pretraining only; writes the resulting checkpoint. */
hardpinn_status hardpinn_pretrain(const hardpinn_config* config, const char* checkpoint_path,
                                  char** out_report_json);

/* Error report of a checkpoint on the configured evaluation grid. */
hardpinn_status hardpinn_evaluate(const hardpinn_config* config, const char* checkpoint_path,
                                  char** out_report_json);

/* Network values on the evaluation grid as a grid CSV. */
hardpinn_status hardpinn_export_heatmap(const hardpinn_config* config, const char* checkpoint_path,
                                        const char* csv_path);

/* Builds the spectral reference grid for the configured reaction-diffusion
 * problem and writes it as a grid CSV. */
hardpinn_status hardpinn_build_reference(const hardpinn_config* config, const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* HARDPINN_H */
