#pragma once

#include <Eigen/Dense>
#include <vector>

#include "helmpinn/network.hpp"

namespace helmpinn {

/// How many input-derivative channels to carry through the network.
///   Value:    the outputs only (supervised losses).
///   Gradient: outputs plus d first derivatives (boundary residuals).
///   Hessian:  outputs, gradient and the full d x d Hessian (PDE residuals).
enum class DerivLevel { Value, Gradient, Hessian };

inline int channel_count(DerivLevel level, int dim) {
  switch (level) {
    case DerivLevel::Value: return 1;
    case DerivLevel::Gradient: return 1 + dim;
    case DerivLevel::Hessian: return 1 + dim + dim * dim;
  }
  return 1;
}

/// Per-point state is a (width x C) block of columns laid out as
/// [value | d/dx_0 .. d/dx_{d-1} | d2/dx_a dx_b row-major]. A chunk of m
/// points stacks these blocks side by side, so each linear layer is one
/// GEMM over all channels of all points.
struct LayerTape {
  Eigen::MatrixXd preact;   // W * S_prev (+ bias on value columns)
  Eigen::MatrixXd state;    // after the activation mixing
  Eigen::ArrayXXd s1, s2, s3;  // activation derivatives at the value column
};

/// Scratch for one chunk; reusable across calls to avoid reallocation.
struct PropagationWorkspace {
  Eigen::MatrixXd input_state;
  std::vector<LayerTape> tape;
  Eigen::MatrixXd state_adj;
  Eigen::MatrixXd preact_adj;
  int points = 0;
  DerivLevel level = DerivLevel::Value;
};

/// Forward pass over a chunk of points (rows of `pts`). When
/// `keep_for_reverse` is set the tape stores everything
/// backward_chunk needs. Returns the output state (output_dim x C*m)
/// held inside the workspace.
const Eigen::MatrixXd& forward_chunk(const ParameterVector& params,
                                     const NetworkSpec& spec,
                                     const Eigen::Ref<const Eigen::MatrixXd>& pts,
                                     DerivLevel level, bool keep_for_reverse,
                                     PropagationWorkspace& ws);

/// Reverse pass: given the adjoint of the output state (same shape as the
/// forward result), accumulates the loss gradient with respect to every
/// parameter into `grad` (+=). Requires a workspace filled by
/// forward_chunk with keep_for_reverse = true.
void backward_chunk(const ParameterVector& params, const NetworkSpec& spec,
                    const Eigen::Ref<const Eigen::MatrixXd>& output_adjoint,
                    PropagationWorkspace& ws, Eigen::VectorXd& grad);

} // namespace helmpinn
