#include "helmpinn/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "helmpinn/propagation.hpp"
#include "helmpinn/rng.hpp"

namespace helmpinn {

void NetworkSpec::validate() const {
  if (input_dim != 2 && input_dim != 3)
    throw std::invalid_argument("network input_dim must be 2 or 3");
  if (output_dim != 2)
    throw std::invalid_argument("network output_dim must be 2");
  if (hidden_widths.empty())
    throw std::invalid_argument("network needs at least one hidden layer");
  for (int w : hidden_widths)
    if (w < 1) throw std::invalid_argument("hidden widths must be >= 1");
  if (hidden_activations.size() != hidden_widths.size())
    throw std::invalid_argument(
        "need one hidden activation per hidden layer (" +
        std::to_string(hidden_widths.size()) + " layers, " +
        std::to_string(hidden_activations.size()) + " activations)");
  for (const auto& a : hidden_activations) a.validate();
  output_activation.validate();
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
}

std::uint64_t activation_code(const ActivationSpec& a) {
  std::uint64_t code = static_cast<std::uint64_t>(a.kind) << 56;
  if (a.kind == ActivationKind::SinScaled) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(a.scale));
    std::memcpy(&bits, &a.scale, sizeof(bits));
    code ^= bits >> 8;
  }
  return code;
}

} // namespace

std::uint64_t NetworkSpec::architecture_hash() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, static_cast<std::uint64_t>(input_dim));
  fnv_mix(h, static_cast<std::uint64_t>(output_dim));
  for (std::size_t l = 0; l < hidden_widths.size(); ++l) {
    fnv_mix(h, static_cast<std::uint64_t>(hidden_widths[l]));
    fnv_mix(h, activation_code(hidden_activations[l]));
  }
  fnv_mix(h, activation_code(output_activation));
  return h;
}

ParameterLayout ParameterLayout::from_spec(const NetworkSpec& spec) {
  ParameterLayout layout;
  std::int64_t offset = 0;
  for (int l = 0; l < spec.layer_count(); ++l) {
    LayerExtent e;
    e.in = spec.layer_in(l);
    e.out = spec.layer_out(l);
    e.weight_offset = offset;
    e.bias_offset = offset + e.weight_size();
    offset = e.end();
    layout.layers.push_back(e);
  }
  layout.total = offset;
  return layout;
}

bool ParameterVector::all_trainable() const {
  for (std::uint8_t t : trainable)
    if (!t) return false;
  return true;
}

std::int64_t ParameterVector::trainable_count() const {
  std::int64_t n = 0;
  for (std::uint8_t t : trainable) n += t ? 1 : 0;
  return n;
}

ParameterVector init_glorot(const NetworkSpec& spec) {
  spec.validate();
  ParameterVector p;
  p.layout = ParameterLayout::from_spec(spec);
  p.values = Eigen::VectorXd::Zero(p.layout.total);
  p.trainable.assign(static_cast<std::size_t>(p.layout.total), 1);

  Rng rng(spec.init_seed);
  for (int l = 0; l < spec.layer_count(); ++l) {
    const auto& e = p.layout.layers[static_cast<std::size_t>(l)];
    const double limit = std::sqrt(6.0 / (e.in + e.out));
    double* w = p.values.data() + e.weight_offset;
    for (std::int64_t i = 0; i < e.weight_size(); ++i)
      w[i] = rng.uniform(-limit, limit);
    // biases stay zero
  }
  return p;
}

Eigen::Vector2d forward(const ParameterVector& params, const NetworkSpec& spec,
                        const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != spec.input_dim)
    throw std::invalid_argument("forward: point has wrong dimension");
  PropagationWorkspace ws;
  const auto& out =
      forward_chunk(params, spec, x.transpose(), DerivLevel::Value, false, ws);
  return out.col(0);
}

EvalWithDerivatives forward_with_derivatives(
    const ParameterVector& params, const NetworkSpec& spec,
    const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != spec.input_dim)
    throw std::invalid_argument(
        "forward_with_derivatives: point has wrong dimension");
  const int d = spec.input_dim;
  PropagationWorkspace ws;
  const auto& out = forward_chunk(params, spec, x.transpose(),
                                  DerivLevel::Hessian, false, ws);
  EvalWithDerivatives ev;
  ev.value = out.col(0);
  ev.input_gradient.resize(2, d);
  for (int a = 0; a < d; ++a) ev.input_gradient.col(a) = out.col(1 + a);
  ev.input_laplacian.setZero();
  for (int a = 0; a < d; ++a)
    ev.input_laplacian += out.col(1 + d + a * d + a);
  return ev;
}

Eigen::MatrixX2d forward_batch(const ParameterVector& params,
                               const NetworkSpec& spec,
                               const Eigen::Ref<const Eigen::MatrixXd>& x) {
  if (x.cols() != spec.input_dim)
    throw std::invalid_argument("forward_batch: points have wrong dimension");
  const Eigen::Index n = x.rows();
  Eigen::MatrixX2d out(n, 2);
  PropagationWorkspace ws;
  constexpr Eigen::Index kChunk = 1024;
  for (Eigen::Index begin = 0; begin < n; begin += kChunk) {
    const Eigen::Index m = std::min(kChunk, n - begin);
    const auto& res = forward_chunk(params, spec, x.middleRows(begin, m),
                                    DerivLevel::Value, false, ws);
    out.middleRows(begin, m) = res.transpose();
  }
  return out;
}

} // namespace helmpinn
