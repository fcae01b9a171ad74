#include <doctest.h>

#include <cmath>

#include "helmpinn/network.hpp"
#include "test_util.hpp"

using namespace helmpinn;
using helmpinn::test::small_spec;

TEST_CASE("parameter layout packs weights then bias per layer") {
  const NetworkSpec spec =
      small_spec(2, {5, 3}, ActivationSpec::sin_scaled(1.0), 7);
  const ParameterLayout layout = ParameterLayout::from_spec(spec);
  REQUIRE(layout.layers.size() == 3);
  CHECK(layout.layers[0].in == 2);
  CHECK(layout.layers[0].out == 5);
  CHECK(layout.layers[0].weight_offset == 0);
  CHECK(layout.layers[0].bias_offset == 10);
  CHECK(layout.layers[1].weight_offset == 15);
  CHECK(layout.layers[1].in == 5);
  CHECK(layout.layers[1].out == 3);
  CHECK(layout.layers[2].in == 3);
  CHECK(layout.layers[2].out == 2);
  // (2*5+5) + (5*3+3) + (3*2+2) = 41
  CHECK(layout.total == 41);
  CHECK(layout.layers[2].end() == 41);
}

TEST_CASE("glorot init is seeded, bounded and zero-biased") {
  const NetworkSpec spec =
      small_spec(3, {16, 16}, ActivationSpec::sin_scaled(1.0), 42);
  const ParameterVector a = init_glorot(spec);
  const ParameterVector b = init_glorot(spec);
  CHECK(a.values == b.values);
  CHECK(a.all_trainable());
  CHECK(a.trainable_count() == a.size());

  NetworkSpec other = spec;
  other.init_seed = 43;
  const ParameterVector c = init_glorot(other);
  CHECK(a.values != c.values);

  for (int l = 0; l < spec.layer_count(); ++l) {
    const double limit =
        std::sqrt(6.0 / (spec.layer_in(l) + spec.layer_out(l)));
    CHECK(a.weight(l).cwiseAbs().maxCoeff() <= limit);
    CHECK(a.bias(l).cwiseAbs().maxCoeff() == 0.0);
    // a seeded uniform draw hugging zero everywhere would be broken
    CHECK(a.weight(l).cwiseAbs().maxCoeff() > 0.5 * limit);
  }
}

TEST_CASE("forward pass matches a hand-rolled single hidden layer") {
  NetworkSpec spec = small_spec(2, {3}, ActivationSpec::sin_scaled(2.0), 5);
  ParameterVector params = init_glorot(spec);
  const Eigen::Vector2d x(0.3, -0.7);

  const Eigen::Vector3d z1 =
      params.weight(0) * x + Eigen::Vector3d(params.bias(0));
  const Eigen::Vector3d a1 = (2.0 * z1.array()).sin();
  const Eigen::Vector2d want =
      params.weight(1) * a1 + Eigen::Vector2d(params.bias(1));
  const Eigen::Vector2d got = forward(params, spec, x);
  CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-14));
  CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-14));
}

TEST_CASE("forward_batch agrees with forward row by row") {
  const NetworkSpec spec =
      small_spec(3, {8, 8}, ActivationSpec::tanh(), 11);
  const ParameterVector params = init_glorot(spec);
  Rng rng(99);
  Eigen::MatrixXd pts(17, 3);
  for (Eigen::Index p = 0; p < pts.rows(); ++p)
    for (int j = 0; j < 3; ++j) pts(p, j) = rng.uniform(-1.0, 1.0);
  const Eigen::MatrixX2d out = forward_batch(params, spec, pts);
  for (Eigen::Index p = 0; p < pts.rows(); ++p) {
    const Eigen::Vector2d one = forward(params, spec, pts.row(p).transpose());
    CHECK(out(p, 0) == doctest::Approx(one[0]).epsilon(1e-14));
    CHECK(out(p, 1) == doctest::Approx(one[1]).epsilon(1e-14));
  }
}

TEST_CASE("architecture hash separates shapes, activations and scales") {
  const NetworkSpec base =
      small_spec(2, {8, 8}, ActivationSpec::sin_scaled(1.0), 1);
  NetworkSpec widths = base;
  widths.hidden_widths = {8, 9};
  widths.hidden_activations.assign(2, ActivationSpec::sin_scaled(1.0));
  NetworkSpec act = base;
  act.hidden_activations.assign(2, ActivationSpec::tanh());
  NetworkSpec scale = base;
  scale.hidden_activations.assign(2, ActivationSpec::sin_scaled(4.0));
  NetworkSpec seed = base;
  seed.init_seed = 77;

  CHECK(base.architecture_hash() != widths.architecture_hash());
  CHECK(base.architecture_hash() != act.architecture_hash());
  CHECK(base.architecture_hash() != scale.architecture_hash());
  // the seed is not part of the architecture
  CHECK(base.architecture_hash() == seed.architecture_hash());
}

TEST_CASE("spec validation rejects malformed networks") {
  NetworkSpec spec = small_spec(2, {4}, ActivationSpec::sin_scaled(1.0), 1);
  CHECK_NOTHROW(spec.validate());

  NetworkSpec no_hidden = spec;
  no_hidden.hidden_widths.clear();
  no_hidden.hidden_activations.clear();
  CHECK_THROWS_AS(no_hidden.validate(), std::invalid_argument);

  NetworkSpec mismatched = spec;
  mismatched.hidden_activations.clear();
  CHECK_THROWS_AS(mismatched.validate(), std::invalid_argument);

  NetworkSpec bad_dim = spec;
  bad_dim.input_dim = 4;
  CHECK_THROWS_AS(bad_dim.validate(), std::invalid_argument);
}
