#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "helmpinn/loss.hpp"
#include "helmpinn/oracle.hpp"

namespace helmpinn {

/// Relative L2 error in percent: 100 sqrt(sum |ref - pred|^2 / sum |ref|^2)
/// with p = p_r + i p_i. Point sets must match.
double relative_l2(const FieldOnPoints& pred, const FieldOnPoints& ref);

struct ErrorReport {
  double e_rel_ref = 0.0;
  double e_rel_gf = 0.0;
  std::int64_t n_points = 0;
  bool meaningful = false;  // e_rel_ref < e_rel_gf
};

ErrorReport meaningful_check(const FieldOnPoints& pred,
                             const FieldOnPoints& ref,
                             const FieldOnPoints& gf);

enum class DirectionNorm { FilterNorm, GlobalNorm };

struct LandscapeGrid {
  Eigen::VectorXd alphas;
  Eigen::VectorXd betas;
  Eigen::MatrixXd loss;  // loss(i, j) at params + alphas[i] d1 + betas[j] d2
  std::pair<std::uint64_t, std::uint64_t> direction_seeds;
  DirectionNorm normalization = DirectionNorm::FilterNorm;
};

/// Seeded random direction normalized against the parameter vector:
/// FilterNorm rescales each weight row and each bias block to the norm of
/// the corresponding block of params; GlobalNorm rescales the whole vector.
Eigen::VectorXd make_direction(const ParameterVector& params,
                               std::uint64_t seed, DirectionNorm norm);

/// Loss over the (alpha, beta) grid spanned by two explicit directions.
/// Non-finite losses are stored as +infinity. resolution must be odd so
/// the unperturbed parameters sit exactly on the center cell.
LandscapeGrid landscape_grid_with_directions(
    const ParameterVector& params, const NetworkSpec& spec,
    const HelmholtzProblem& problem, const SampleSet& samples,
    const LossWeights& weights, double half_range, int resolution,
    const Eigen::VectorXd& d1, const Eigen::VectorXd& d2);

/// Same with two seeded FilterNorm/GlobalNorm directions.
LandscapeGrid landscape_grid(const ParameterVector& params,
                             const NetworkSpec& spec,
                             const HelmholtzProblem& problem,
                             const SampleSet& samples,
                             const LossWeights& weights, double half_range,
                             int resolution,
                             std::pair<std::uint64_t, std::uint64_t> seeds,
                             DirectionNorm norm = DirectionNorm::FilterNorm);

struct EigenvalueEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Power iteration on central-difference Hessian-vector products of an
/// arbitrary gradient field around `center`. Masked (frozen) coordinates
/// are held at zero in every probe. Returns the largest Rayleigh quotient
/// seen, flagged unconverged when the residual never reached tol.
EigenvalueEstimate power_iteration_hvp(const GradientFn& grad_at,
                                       const Eigen::VectorXd& center,
                                       const std::vector<std::uint8_t>& mask,
                                       double h, int iters, double tol,
                                       std::uint64_t seed);

/// Top Hessian eigenvalue of the collocation loss at params, with
/// h = 1e-4 (1 + max |params|).
EigenvalueEstimate hessian_top_eigenvalue(const ParameterVector& params,
                                          const NetworkSpec& spec,
                                          const HelmholtzProblem& problem,
                                          const SampleSet& samples,
                                          const LossWeights& weights,
                                          int iters, double tol,
                                          std::uint64_t seed = 7);

} // namespace helmpinn
