#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "helmpinn/activation.hpp"

namespace helmpinn {

/// Spatial point with at most three coordinates, stack-allocated.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// Architecture of the dense network x -> (p_r, p_i).
struct NetworkSpec {
  int input_dim = 3;
  std::vector<int> hidden_widths;
  int output_dim = 2;
  std::vector<ActivationSpec> hidden_activations;
  ActivationSpec output_activation = ActivationSpec::linear();
  std::uint64_t init_seed = 0;

  void validate() const;

  int layer_count() const {
    return static_cast<int>(hidden_widths.size()) + 1;
  }
  int layer_in(int layer) const {
    return layer == 0 ? input_dim : hidden_widths[layer - 1];
  }
  int layer_out(int layer) const {
    return layer + 1 == layer_count() ? output_dim : hidden_widths[layer];
  }
  const ActivationSpec& layer_activation(int layer) const {
    return layer + 1 == layer_count() ? output_activation
                                      : hidden_activations[layer];
  }

  /// Stable hash of the architecture (not the seed); stored in
  /// checkpoints so stale parameter files are rejected.
  std::uint64_t architecture_hash() const;
};

/// Offsets of one linear layer inside the flat parameter array. Weights
/// are a column-major (out x in) block followed by the bias.
struct LayerExtent {
  std::int64_t weight_offset = 0;
  int in = 0;
  int out = 0;
  std::int64_t bias_offset = 0;

  std::int64_t weight_size() const {
    return static_cast<std::int64_t>(in) * out;
  }
  std::int64_t end() const { return bias_offset + out; }
};

struct ParameterLayout {
  std::vector<LayerExtent> layers;
  std::int64_t total = 0;

  static ParameterLayout from_spec(const NetworkSpec& spec);
};

/// Flat trainable parameters plus the freeze mask used by layer-frozen
/// fine-tuning. Entries with trainable[i] == false receive zero gradient
/// and are never moved by the optimizer.
struct ParameterVector {
  Eigen::VectorXd values;
  ParameterLayout layout;
  std::vector<std::uint8_t> trainable;

  std::int64_t size() const { return values.size(); }
  bool all_trainable() const;
  std::int64_t trainable_count() const;

  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const {
    const auto& e = layout.layers[static_cast<std::size_t>(layer)];
    return {values.data() + e.weight_offset, e.out, e.in};
  }
  Eigen::Map<Eigen::MatrixXd> weight(int layer) {
    const auto& e = layout.layers[static_cast<std::size_t>(layer)];
    return {values.data() + e.weight_offset, e.out, e.in};
  }
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const {
    const auto& e = layout.layers[static_cast<std::size_t>(layer)];
    return {values.data() + e.bias_offset, e.out};
  }
  Eigen::Map<Eigen::VectorXd> bias(int layer) {
    const auto& e = layout.layers[static_cast<std::size_t>(layer)];
    return {values.data() + e.bias_offset, e.out};
  }
};

/// Network output with exact first and second input derivatives.
/// Row 0 of each field belongs to p_r, row 1 to p_i.
struct EvalWithDerivatives {
  Eigen::Vector2d value;
  Eigen::Matrix<double, 2, Eigen::Dynamic, Eigen::ColMajor, 2, 3> input_gradient;
  Eigen::Vector2d input_laplacian;
};

/// Glorot-uniform weights, zero biases, everything trainable.
/// Deterministic in spec.init_seed.
ParameterVector init_glorot(const NetworkSpec& spec);

/// Plain forward pass; pure in (params, x).
Eigen::Vector2d forward(const ParameterVector& params, const NetworkSpec& spec,
                        const Eigen::Ref<const Eigen::VectorXd>& x);

/// Forward pass carrying exact gradient and Laplacian with respect to x.
EvalWithDerivatives forward_with_derivatives(
    const ParameterVector& params, const NetworkSpec& spec,
    const Eigen::Ref<const Eigen::VectorXd>& x);

/// Batched plain forward: points are rows of x (n x input_dim); returns
/// n x 2 outputs.
Eigen::MatrixX2d forward_batch(const ParameterVector& params,
                               const NetworkSpec& spec,
                               const Eigen::Ref<const Eigen::MatrixXd>& x);

} // namespace helmpinn
