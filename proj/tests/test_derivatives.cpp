#include <doctest.h>

#include <cmath>

#include "helmpinn/loss.hpp"
#include "helmpinn/network.hpp"
#include "helmpinn/sampling.hpp"
#include "test_util.hpp"

using namespace helmpinn;
using namespace helmpinn::test;

namespace {

HelmholtzProblem unit_problem(int dim) {
  HelmholtzProblem prob;
  prob.domain = BoxDomain::unit(dim);
  prob.medium.nu = 1.0;
  prob.medium.eta = -0.04;
  prob.source.location = prob.domain.center();
  prob.source.cosine_wavenumber = prob.medium.k0();
  return prob;
}

ActivationSpec pick_activation(Rng& rng) {
  switch (rng.below(3)) {
    case 0:
      return ActivationSpec::sin_scaled(0.5 + rng.uniform01() * 3.5);
    case 1:
      return ActivationSpec::tanh();
    default:
      return ActivationSpec::sin_scaled(1.0);
  }
}

NetworkSpec random_spec(Rng& rng, int dim) {
  const int depth = 1 + static_cast<int>(rng.below(3));
  std::vector<int> widths;
  for (int l = 0; l < depth; ++l)
    widths.push_back(4 + static_cast<int>(rng.below(29)));  // <= 32
  NetworkSpec spec;
  spec.input_dim = dim;
  spec.hidden_widths = widths;
  for (int l = 0; l < depth; ++l)
    spec.hidden_activations.push_back(pick_activation(rng));
  spec.init_seed = rng.next_u64();
  return spec;
}

} // namespace

TEST_CASE("input gradients and Laplacians match finite differences") {
  Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 3;
    const NetworkSpec spec = random_spec(rng, dim);
    const ParameterVector params = init_glorot(spec);
    const BoxDomain box = BoxDomain::unit(dim);
    const Point x = random_point(rng, box);

    const EvalWithDerivatives ev = forward_with_derivatives(params, spec, x);
    const Eigen::Vector2d plain = forward(params, spec, x);
    CHECK(rel_err(ev.value[0], plain[0]) < 1e-14);
    CHECK(rel_err(ev.value[1], plain[1]) < 1e-14);

    for (int out = 0; out < 2; ++out) {
      double fd_lap = 0.0;
      for (int a = 0; a < dim; ++a) {
        auto slice = [&](double t) {
          Point xt = x;
          xt[a] = t;
          return forward(params, spec, xt)[out];
        };
        const double fd_grad = central_diff(slice, x[a], 1e-6);
        CHECK(rel_err(ev.input_gradient(out, a), fd_grad) < 1e-6);
        fd_lap += second_diff(slice, x[a], 1e-4);
      }
      CHECK(rel_err(ev.input_laplacian[out], fd_lap) < 1e-4);
    }
  }
}

TEST_CASE("collocation loss gradient matches finite differences") {
  Rng rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 3;
    HelmholtzProblem prob = unit_problem(dim);
    if (trial >= 4) {
      prob.source.sharpness = 0.5;  // finite Gaussian source
      prob.bc_grouping = BcGrouping::PerFaceSets;
    }
    const SampleSet samples = sample(prob, 2.0, 31 + trial);
    const NetworkSpec spec = random_spec(rng, dim);
    ParameterVector params = init_glorot(spec);
    LossWeights weights;
    weights.w_pde_r = 0.7;
    weights.w_pde_i = 0.2;
    weights.w_bc_r = 1.3;
    weights.w_bc_i = 0.4;

    Eigen::VectorXd grad;
    const LossBreakdown lb =
        loss_gradient(params, spec, prob, samples, weights, grad);
    REQUIRE(grad.size() == params.size());
    CHECK(lb.total ==
          doctest::Approx(weights.w_pde_r * lb.pde_r + weights.w_pde_i * lb.pde_i +
                          weights.w_bc_r * lb.bc_r + weights.w_bc_i * lb.bc_i)
              .epsilon(1e-12));

    const double h = 1e-6;
    for (int probe = 0; probe < 10; ++probe) {
      const auto i = static_cast<Eigen::Index>(
          rng.below(static_cast<std::uint64_t>(params.size())));
      ParameterVector shifted = params;
      auto at = [&](double t) {
        shifted.values[i] = params.values[i] + t;
        return total_loss(shifted, spec, prob, samples, weights).total;
      };
      const double fd = (at(h) - at(-h)) / (2.0 * h);
      CHECK(rel_err(grad[i], fd) < 1e-5);
    }
  }
}

TEST_CASE("mse gradient matches finite differences") {
  Rng rng(555);
  const NetworkSpec spec =
      small_spec(3, {10, 10}, ActivationSpec::sin_scaled(2.0), 9);
  ParameterVector params = init_glorot(spec);
  Eigen::MatrixXd pts(20, 3);
  Eigen::MatrixX2d targets(20, 2);
  for (Eigen::Index p = 0; p < 20; ++p) {
    for (int j = 0; j < 3; ++j) pts(p, j) = rng.uniform01();
    targets(p, 0) = rng.normal();
    targets(p, 1) = rng.normal();
  }

  Eigen::VectorXd grad;
  const double loss = mse_gradient(params, spec, pts, targets, grad);

  // hand value: mean over points of squared complex mismatch
  const Eigen::MatrixX2d out = forward_batch(params, spec, pts);
  const double want = ((out - targets).array() * (out - targets).array())
                          .rowwise()
                          .sum()
                          .mean();
  CHECK(loss == doctest::Approx(want).epsilon(1e-12));

  for (int probe = 0; probe < 8; ++probe) {
    const auto i = static_cast<Eigen::Index>(
        rng.below(static_cast<std::uint64_t>(params.size())));
    ParameterVector shifted = params;
    auto at = [&](double t) {
      shifted.values[i] = params.values[i] + t;
      return mse_loss(shifted, spec, pts, targets);
    };
    const double fd = (at(1e-6) - at(-1e-6)) / 2e-6;
    CHECK(rel_err(grad[i], fd) < 1e-6);
  }
}

TEST_CASE("frozen entries receive exactly zero gradient") {
  const NetworkSpec spec =
      small_spec(2, {6, 6}, ActivationSpec::sin_scaled(1.0), 3);
  ParameterVector params = init_glorot(spec);
  const HelmholtzProblem prob = unit_problem(2);
  const SampleSet samples = sample(prob, 2.0, 8);

  // freeze the middle layer by hand
  const LayerExtent& mid = params.layout.layers[1];
  std::fill(params.trainable.begin() + mid.weight_offset,
            params.trainable.begin() + mid.end(), std::uint8_t{0});

  Eigen::VectorXd grad;
  loss_gradient(params, spec, prob, samples, LossWeights{}, grad);
  CHECK(grad.segment(mid.weight_offset, mid.end() - mid.weight_offset)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  // the surrounding layers still learn
  CHECK(grad.segment(0, mid.weight_offset).cwiseAbs().maxCoeff() > 0.0);
}
