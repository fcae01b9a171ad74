#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmpinn/network.hpp"
#include "helmpinn/physics.hpp"
#include "helmpinn/training.hpp"

namespace helmpinn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pretraining block of the config; the supervised data itself is
/// materialized by the runner from the named oracle.
struct PretrainSettings {
  enum class DataSource { GF, Analytic, Modal };
  int iterations = 50000;
  double learning_rate = 1e-3;
  double train_fraction = 0.007;
  double test_fraction = 0.003;
  std::uint64_t seed = 0;
  int log_every = 100;
  DataSource data_source = DataSource::GF;
};

struct EvalSettings {
  int grid_per_axis = 41;
  bool compare_gf = false;
};

struct OutputSettings {
  std::string directory = "run";
  int checkpoint_every = 0;  // 0: only the final checkpoint
};

struct SweepSettings {
  std::vector<std::uint64_t> seeds;  // repeat seeds; empty: config seeds only
};

struct LandscapeSettings {
  std::uint64_t seed1 = 1001;
  std::uint64_t seed2 = 2002;
};

/// One experiment: problem, network, sampling, budgets, outputs. Every
/// random choice traces to a named seed in here.
struct RunConfig {
  HelmholtzProblem problem;
  NetworkSpec network;
  double ppw = 6.0;
  std::uint64_t sample_seed = 0;
  TrainConfig training;
  std::optional<PretrainSettings> pretrain;
  EvalSettings evaluation;
  OutputSettings outputs;
  SweepSettings sweep;
  LandscapeSettings landscape;

  void validate() const;
};

/// Strict parse: unknown keys are rejected with the offending path, missing
/// required fields name the field (e.g. "problem.nu required"). A manifest
/// written by a previous run (top-level "config" object) is accepted too.
RunConfig parse_config(const nlohmann::json& root);
RunConfig load_config(const std::string& path);

/// Canonical resolved form; parse_config(config_to_json(c)) == c.
nlohmann::json config_to_json(const RunConfig& config);

/// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const RunConfig& config);

/// Resolved config plus derived constants (f, k0, k_c^2), tool version and
/// config hash.
nlohmann::json make_manifest(const RunConfig& config);

/// Seeds for one repeat cell: init, sampling and split seeds derived from
/// a single repeat seed so three-seed tables stay reproducible.
struct DerivedSeeds {
  std::uint64_t init_seed;
  std::uint64_t sample_seed;
  std::uint64_t split_seed;
};
DerivedSeeds derive_seeds(std::uint64_t repeat_seed);

} // namespace helmpinn
