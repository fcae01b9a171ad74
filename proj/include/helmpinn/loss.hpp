#pragma once

#include <Eigen/Dense>

#include "helmpinn/network.hpp"
#include "helmpinn/physics.hpp"
#include "helmpinn/sampling.hpp"

namespace helmpinn {

/// Collocation loss of the network on a fixed sample set. Under
/// PerFaceSets the BC terms are means of per-face means and the per-face
/// values are reported in LossBreakdown.per_set.
LossBreakdown total_loss(const ParameterVector& params,
                         const NetworkSpec& spec,
                         const HelmholtzProblem& problem,
                         const SampleSet& samples, const LossWeights& weights);

/// Exact gradient of total_loss. `grad` is resized to params.size();
/// entries with trainable == false are zeroed. Returns the breakdown of
/// the same evaluation (one sweep computes both).
LossBreakdown loss_gradient(const ParameterVector& params,
                            const NetworkSpec& spec,
                            const HelmholtzProblem& problem,
                            const SampleSet& samples,
                            const LossWeights& weights, Eigen::VectorXd& grad);

/// Supervised mean squared error over points (rows of pts):
/// mean over points of (p_r - t_r)^2 + (p_i - t_i)^2.
double mse_loss(const ParameterVector& params, const NetworkSpec& spec,
                const Eigen::Ref<const Eigen::MatrixXd>& pts,
                const Eigen::Ref<const Eigen::MatrixX2d>& targets);

/// Exact gradient of mse_loss with the same masking contract as
/// loss_gradient. Returns the loss value.
double mse_gradient(const ParameterVector& params, const NetworkSpec& spec,
                    const Eigen::Ref<const Eigen::MatrixXd>& pts,
                    const Eigen::Ref<const Eigen::MatrixX2d>& targets,
                    Eigen::VectorXd& grad);

} // namespace helmpinn
