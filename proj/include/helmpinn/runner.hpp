#pragma once

#include <string>
#include <vector>

namespace helmpinn {

/// CLI entry points. Each returns a process exit code and reports errors
/// on stderr as a single machine-readable line "error: <message>".

/// Runs the configured experiment (scratch PINN, or pretrain + PINN when a
/// pretrain block exists) and writes manifest.json, loss.csv, errors.csv
/// and checkpoints into the output directory.
int cmd_train(const std::string& config_path);

/// Cross product of axis values and repeat seeds; one subdirectory per
/// cell plus an aggregate summary.csv. Per-cell failures are recorded and
/// the sweep continues.
int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::vector<std::string>& values);

/// Writes the chosen oracle field on the evaluation grid as CSV.
int cmd_oracle(const std::string& config_path, const std::string& which,
               const std::string& points_out);

/// Loss landscape around a checkpoint; writes the grid CSV plus a JSON
/// sidecar with seeds, range and normalization.
int cmd_landscape(const std::string& config_path,
                  const std::string& checkpoint_path, int resolution,
                  double half_range);

} // namespace helmpinn
