#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "helmpinn/loss.hpp"
#include "helmpinn/oracle.hpp"

namespace helmpinn {

/// Which linear layers stay trainable. Layer indices count the L = hidden+1
/// linear layers from the input side.
struct FreezePolicy {
  enum class Kind { None, AllButFirstK, AllButLastK };
  Kind kind = Kind::None;
  int k = 0;

  static FreezePolicy none() { return {}; }
  static FreezePolicy all_but_first(int k) { return {Kind::AllButFirstK, k}; }
  static FreezePolicy all_but_last(int k) { return {Kind::AllButLastK, k}; }
};

/// Rewrites the trainable mask: None -> everything trainable,
/// AllButFirstK -> only the first k layers, AllButLastK -> only the last k.
void apply_freeze(ParameterVector& params, const FreezePolicy& policy);

struct TrainConfig {
  int iterations = 0;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int log_every = 100;
  LossWeights loss_weights;
  std::uint64_t seed = 0;
  FreezePolicy freeze_policy;

  void validate() const;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t t = 0;

  static AdamState zero(Eigen::Index n);
};

/// One bias-corrected Adam update. Frozen entries are untouched and their
/// moments are left alone; the moment state persists across calls.
void adam_step(ParameterVector& params, const Eigen::VectorXd& grad,
               AdamState& state, double lr, double beta1, double beta2,
               double eps);

/// Raised when a loss term turns non-finite; carries the iteration and the
/// first offending term so divergence is surfaced, never masked.
struct TrainingDivergedError : std::runtime_error {
  int iteration;
  std::string term;
  TrainingDivergedError(int it, std::string term_name);
};

struct TrainingRecord {
  std::vector<std::pair<int, LossBreakdown>> loss_history;
  std::vector<std::pair<int, double>> error_history;
  ParameterVector final_params;
  std::optional<int> onset_iteration;
  double wall_time_s = 0.0;
};

/// Optional relative-error probe evaluated at every logged iteration.
using ErrorFn = std::function<double(const ParameterVector&)>;

/// Optional hook called after every optimizer step with the 1-based
/// iteration count (checkpoint cadence and the like).
using StepCallback = std::function<void(int, const ParameterVector&)>;

/// Full-batch Adam on the collocation loss. Logs at iteration 0, every
/// log_every, and at `iterations`. Deterministic given all seeds.
TrainingRecord train_pinn(const NetworkSpec& spec,
                          const HelmholtzProblem& problem,
                          const SampleSet& samples, const TrainConfig& config,
                          const ParameterVector& init_params,
                          const ErrorFn& error_fn = {},
                          const StepCallback& step_fn = {});

struct PretrainConfig {
  int iterations = 0;
  double learning_rate = 1e-3;
  FieldOnPoints data;
  double train_fraction = 0.007;
  double test_fraction = 0.003;
  std::uint64_t seed = 0;
  int log_every = 100;

  void validate() const;
};

struct PretrainRecord {
  ParameterVector params;
  std::vector<std::pair<int, double>> mse_history;
  double test_mse = 0.0;
  double wall_time_s = 0.0;
};

/// Supervised MSE fit of a Glorot-initialized network (spec.init_seed) on a
/// seeded train split of the data; reports the held-out-split MSE.
PretrainRecord pretrain_supervised(const NetworkSpec& spec,
                                   const PretrainConfig& config);

struct DiscrepancyRecord {
  PretrainRecord pretrain;
  TrainingRecord pinn;
};

/// pretrain_supervised, then the freeze policy of pinn_config, then
/// train_pinn from the pretrained parameters.
DiscrepancyRecord run_discrepancy(const NetworkSpec& spec,
                                  const HelmholtzProblem& problem,
                                  const SampleSet& samples,
                                  const PretrainConfig& pre_config,
                                  const TrainConfig& pinn_config,
                                  const ErrorFn& error_fn = {});

/// First logged iteration where the centered 5-point windowed median of
/// the total loss is <= 1% of the initial windowed median; none if never.
std::optional<int> detect_onset(
    const std::vector<std::pair<int, double>>& total_history);

/// detect_onset over a TrainingRecord's loss history.
std::optional<int> detect_onset(
    const std::vector<std::pair<int, LossBreakdown>>& history);

} // namespace helmpinn
