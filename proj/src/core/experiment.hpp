// Copyright 2026 the hardpinn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/metrics.hpp"

namespace hardpinn {

/// Builds (or loads from the configured cache) the reference grid a
/// reaction-diffusion run needs; returns an empty grid for problems with a
/// closed-form solution.
ReferenceGrid resolve_reference(const RunConfig& config);

/// sample data -> (optionally) pretrain -> train -> evaluate -> write
/// artifacts (config echo, summary, datasets, checkpoints, iteration log)
/// under `output_dir`. Returns the summary document.
nlohmann::json run_experiment(const RunConfig& config, const std::string& output_dir);

/// Runs the base config once per override patch (RFC 7386 merge), each in its
/// own subdirectory, optionally on parallel workers, and writes a summary CSV
/// (problem, coefficients, method, abs_err, rel_err, rel_l2, wall_time, seed).
nlohmann::json run_sweep(const RunConfig& base, const std::vector<nlohmann::json>& overrides,
                         const std::string& output_dir);

/// output_dir fallback chain: explicit argument, config.output_dir, then
/// $HARDPINN_OUTPUT_ROOT/<generated name> (or ./runs/<generated name>).
std::string resolve_output_dir(const RunConfig& config, const std::string& explicit_dir);

}  // namespace hardpinn
