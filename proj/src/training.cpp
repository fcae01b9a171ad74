#include "helmpinn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "helmpinn/rng.hpp"

namespace helmpinn {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

const char* first_bad_term(const LossBreakdown& lb) {
  if (!std::isfinite(lb.pde_r)) return "pde_r";
  if (!std::isfinite(lb.pde_i)) return "pde_i";
  if (!std::isfinite(lb.bc_r)) return "bc_r";
  if (!std::isfinite(lb.bc_i)) return "bc_i";
  if (!std::isfinite(lb.total)) return "total";
  return nullptr;
}

} // namespace

void apply_freeze(ParameterVector& params, const FreezePolicy& policy) {
  const int L = static_cast<int>(params.layout.layers.size());
  if (policy.kind != FreezePolicy::Kind::None &&
      (policy.k < 1 || policy.k > L))
    throw std::invalid_argument("freeze count must be in [1, layer count]");
  for (int l = 0; l < L; ++l) {
    bool on = true;
    if (policy.kind == FreezePolicy::Kind::AllButFirstK)
      on = l < policy.k;
    else if (policy.kind == FreezePolicy::Kind::AllButLastK)
      on = l >= L - policy.k;
    const auto& ext = params.layout.layers[static_cast<std::size_t>(l)];
    std::fill(params.trainable.begin() + ext.weight_offset,
              params.trainable.begin() + ext.end(),
              static_cast<std::uint8_t>(on));
  }
}

void TrainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning_rate must be positive");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
    throw std::invalid_argument("adam betas must lie in [0, 1)");
  if (!(adam_eps > 0.0)) throw std::invalid_argument("adam_eps must be positive");
  if (log_every < 1) throw std::invalid_argument("log_every must be >= 1");
  loss_weights.validate();
}

AdamState AdamState::zero(Eigen::Index n) {
  AdamState s;
  s.m = Eigen::VectorXd::Zero(n);
  s.v = Eigen::VectorXd::Zero(n);
  s.t = 0;
  return s;
}

void adam_step(ParameterVector& params, const Eigen::VectorXd& grad,
               AdamState& state, double lr, double beta1, double beta2,
               double eps) {
  ++state.t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (Eigen::Index i = 0; i < params.values.size(); ++i) {
    if (!params.trainable[static_cast<std::size_t>(i)]) continue;
    const double g = grad[i];
    double& m = state.m[i];
    double& v = state.v[i];
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g * g;
    params.values[i] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
  }
}

TrainingDivergedError::TrainingDivergedError(int it, std::string term_name)
    : std::runtime_error("training diverged at iteration " +
                         std::to_string(it) + ": " + term_name +
                         " is not finite"),
      iteration(it),
      term(std::move(term_name)) {}

TrainingRecord train_pinn(const NetworkSpec& spec,
                          const HelmholtzProblem& problem,
                          const SampleSet& samples, const TrainConfig& config,
                          const ParameterVector& init_params,
                          const ErrorFn& error_fn, const StepCallback& step_fn) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  TrainingRecord rec;
  rec.final_params = init_params;
  ParameterVector& params = rec.final_params;
  apply_freeze(params, config.freeze_policy);

  AdamState adam = AdamState::zero(params.values.size());
  Eigen::VectorXd grad(params.values.size());

  auto log = [&](int it, const LossBreakdown& lb) {
    rec.loss_history.emplace_back(it, lb);
    if (error_fn) rec.error_history.emplace_back(it, error_fn(params));
  };

  for (int it = 0; it < config.iterations; ++it) {
    const LossBreakdown lb = loss_gradient(params, spec, problem, samples,
                                           config.loss_weights, grad);
    if (const char* term = first_bad_term(lb))
      throw TrainingDivergedError(it, term);
    if (it % config.log_every == 0) log(it, lb);
    adam_step(params, grad, adam, config.learning_rate, config.adam_beta1,
              config.adam_beta2, config.adam_eps);
    if (step_fn) step_fn(it + 1, params);
  }
  const LossBreakdown final_lb =
      total_loss(params, spec, problem, samples, config.loss_weights);
  if (const char* term = first_bad_term(final_lb))
    throw TrainingDivergedError(config.iterations, term);
  log(config.iterations, final_lb);

  rec.onset_iteration = detect_onset(rec.loss_history);
  rec.wall_time_s = seconds_since(t0);
  return rec;
}

void PretrainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning_rate must be positive");
  if (log_every < 1) throw std::invalid_argument("log_every must be >= 1");
  if (!(train_fraction > 0.0) || !(test_fraction > 0.0) ||
      train_fraction + test_fraction > 1.0)
    throw std::invalid_argument(
        "train/test fractions must be positive with sum <= 1");
  data.validate();
  if (data.size() < 2)
    throw std::invalid_argument("pretraining data needs >= 2 points");
}

PretrainRecord pretrain_supervised(const NetworkSpec& spec,
                                   const PretrainConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const Eigen::Index n = config.data.size();
  Eigen::Index n_train = std::llround(config.train_fraction * n);
  Eigen::Index n_test = std::llround(config.test_fraction * n);
  n_train = std::clamp<Eigen::Index>(n_train, 1, n - 1);
  n_test = std::clamp<Eigen::Index>(n_test, 1, n - n_train);

  // Seeded Fisher-Yates; the first n_train indices train, the next test.
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(config.seed);
  for (Eigen::Index i = n - 1; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[rng.below(static_cast<std::uint64_t>(i + 1))]);

  const int d = static_cast<int>(config.data.points.cols());
  Eigen::MatrixXd train_pts(n_train, d), test_pts(n_test, d);
  Eigen::MatrixX2d train_t(n_train, 2), test_t(n_test, 2);
  for (Eigen::Index i = 0; i < n_train; ++i) {
    const Eigen::Index s = perm[static_cast<std::size_t>(i)];
    train_pts.row(i) = config.data.points.row(s);
    train_t(i, 0) = config.data.p_r[s];
    train_t(i, 1) = config.data.p_i[s];
  }
  for (Eigen::Index i = 0; i < n_test; ++i) {
    const Eigen::Index s = perm[static_cast<std::size_t>(n_train + i)];
    test_pts.row(i) = config.data.points.row(s);
    test_t(i, 0) = config.data.p_r[s];
    test_t(i, 1) = config.data.p_i[s];
  }

  PretrainRecord rec;
  rec.params = init_glorot(spec);
  AdamState adam = AdamState::zero(rec.params.values.size());
  Eigen::VectorXd grad(rec.params.values.size());

  for (int it = 0; it < config.iterations; ++it) {
    const double mse = mse_gradient(rec.params, spec, train_pts, train_t, grad);
    if (!std::isfinite(mse)) throw TrainingDivergedError(it, "mse");
    if (it % config.log_every == 0) rec.mse_history.emplace_back(it, mse);
    adam_step(rec.params, grad, adam, config.learning_rate, 0.9, 0.999, 1e-8);
  }
  const double final_mse = mse_loss(rec.params, spec, train_pts, train_t);
  if (!std::isfinite(final_mse))
    throw TrainingDivergedError(config.iterations, "mse");
  rec.mse_history.emplace_back(config.iterations, final_mse);

  rec.test_mse = mse_loss(rec.params, spec, test_pts, test_t);
  rec.wall_time_s = seconds_since(t0);
  return rec;
}

DiscrepancyRecord run_discrepancy(const NetworkSpec& spec,
                                  const HelmholtzProblem& problem,
                                  const SampleSet& samples,
                                  const PretrainConfig& pre_config,
                                  const TrainConfig& pinn_config,
                                  const ErrorFn& error_fn) {
  DiscrepancyRecord rec;
  rec.pretrain = pretrain_supervised(spec, pre_config);
  rec.pinn = train_pinn(spec, problem, samples, pinn_config,
                        rec.pretrain.params, error_fn);
  return rec;
}

std::optional<int> detect_onset(
    const std::vector<std::pair<int, double>>& total_history) {
  const int n = static_cast<int>(total_history.size());
  if (n == 0) return std::nullopt;
  auto windowed_median = [&](int i) {
    const int lo = std::max(0, i - 2);
    const int hi = std::min(n - 1, i + 2);
    double w[5];
    int m = 0;
    for (int j = lo; j <= hi; ++j)
      w[m++] = total_history[static_cast<std::size_t>(j)].second;
    std::sort(w, w + m);
    return m % 2 == 1 ? w[m / 2] : 0.5 * (w[m / 2 - 1] + w[m / 2]);
  };
  const double threshold = 0.01 * windowed_median(0);
  for (int i = 0; i < n; ++i)
    if (windowed_median(i) <= threshold)
      return total_history[static_cast<std::size_t>(i)].first;
  return std::nullopt;
}

std::optional<int> detect_onset(
    const std::vector<std::pair<int, LossBreakdown>>& history) {
  std::vector<std::pair<int, double>> totals;
  totals.reserve(history.size());
  for (const auto& [it, lb] : history) totals.emplace_back(it, lb.total);
  return detect_onset(totals);
}

} // namespace helmpinn
