#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <string>

#include "helmpinn/config.hpp"

using namespace helmpinn;
using nlohmann::json;

namespace {
json minimal() {
  return json{{"problem", {{"upper", {1.0, 1.0, 1.0}}, {"nu", 1.0}}},
              {"network", {{"hidden_widths", {8}}}},
              {"training", {{"iterations", 100}}}};
}

std::string thrown_message(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}
} // namespace

TEST_CASE("minimal config resolves sensible defaults") {
  const RunConfig cfg = parse_config(minimal());
  CHECK(cfg.problem.domain.dim == 3);
  CHECK(cfg.problem.domain.lower == Point::Zero(3));
  CHECK(cfg.problem.medium.nu == 1.0);
  CHECK(cfg.problem.medium.eta == 0.0);
  CHECK(cfg.problem.source.is_infinitely_wide());
  CHECK(cfg.problem.source.location == cfg.problem.domain.center());
  CHECK(cfg.problem.source.cosine_wavenumber ==
        doctest::Approx(2.0 * M_PI));
  CHECK(cfg.network.input_dim == 3);
  CHECK(cfg.network.hidden_widths == std::vector<int>{8});
  CHECK(cfg.network.hidden_activations[0] == ActivationSpec::sin_scaled(1.0));
  CHECK(cfg.network.init_seed == 1);
  CHECK(cfg.ppw == 6.0);
  CHECK(cfg.training.iterations == 100);
  CHECK(cfg.training.log_every == 100);
  CHECK(!cfg.pretrain.has_value());
  CHECK(cfg.evaluation.grid_per_axis == 41);
  CHECK(cfg.outputs.directory == "run");
}

TEST_CASE("missing and unknown fields fail with their path") {
  json no_nu = minimal();
  no_nu["problem"].erase("nu");
  CHECK(thrown_message(no_nu) == "problem.nu required");

  json stray_top = minimal();
  stray_top["surprise"] = 1;
  CHECK(thrown_message(stray_top) == "unknown key: surprise");

  json stray_nested = minimal();
  stray_nested["problem"]["bogus"] = 2;
  CHECK(thrown_message(stray_nested) == "unknown key: problem.bogus");

  json stray_deep = minimal();
  stray_deep["training"]["weights"] = {{"pde_r", 1.0}, {"pde_x", 1.0}};
  CHECK(thrown_message(stray_deep) ==
        "unknown key: training.weights.pde_x");

  json no_widths = minimal();
  no_widths["network"].erase("hidden_widths");
  CHECK(thrown_message(no_widths) == "network.hidden_widths required");

  CHECK_THROWS_AS(load_config("does_not_exist.json"), ConfigError);
}

TEST_CASE("activation, freeze and sharpness spellings parse") {
  json j = minimal();
  j["network"]["hidden_widths"] = {8, 8, 8};
  j["network"]["activations"] = {"sin", "sin:2.5", "tanh"};
  j["training"]["freeze"] = "all_but_first:2";
  j["problem"]["source"] = {{"sharpness", 0.5}};
  j["problem"]["eta"] = -0.04;

  const RunConfig cfg = parse_config(j);
  CHECK(cfg.network.hidden_activations[0] == ActivationSpec::sin_scaled(1.0));
  CHECK(cfg.network.hidden_activations[1] == ActivationSpec::sin_scaled(2.5));
  CHECK(cfg.network.hidden_activations[2] == ActivationSpec::tanh());
  CHECK(cfg.training.freeze_policy.kind ==
        FreezePolicy::Kind::AllButFirstK);
  CHECK(cfg.training.freeze_policy.k == 2);
  CHECK(cfg.problem.source.sharpness == 0.5);
  CHECK(cfg.problem.medium.eta == -0.04);

  j["problem"]["source"]["sharpness"] = "inf";
  CHECK(parse_config(j).problem.source.is_infinitely_wide());

  j["network"]["activations"] = "relu";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j["network"]["activations"] = "tanh";
  j["training"]["freeze"] = "all_but_middle:1";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("canonical serialization round-trips exactly") {
  json j = minimal();
  j["problem"]["eta"] = -0.04;
  j["problem"]["bc_grouping"] = "per_face";
  j["network"]["activations"] = "sin:1.5";
  j["sampling"] = {{"ppw", 4.0}, {"seed", 9}};
  j["training"]["weights"] = {{"pde_r", 0.01}, {"bc_r", 1.0}};
  j["pretrain"] = {{"iterations", 10}, {"source", "analytic"}};
  j["evaluation"] = {{"grid_per_axis", 11}, {"compare_gf", true}};
  j["outputs"] = {{"directory", "out"}, {"checkpoint_every", 5}};
  j["sweep"] = {{"seeds", {1, 2, 3}}};
  j["landscape"] = {{"seed1", 4}, {"seed2", 5}};

  const RunConfig cfg = parse_config(j);
  CHECK(cfg.problem.bc_grouping == BcGrouping::PerFaceSets);
  REQUIRE(cfg.pretrain.has_value());
  CHECK(cfg.pretrain->data_source == PretrainSettings::DataSource::Analytic);
  CHECK(cfg.training.loss_weights.w_pde_r == 0.01);
  CHECK(cfg.training.loss_weights.w_bc_i == 1.0);  // untouched default
  CHECK(cfg.sweep.seeds == std::vector<std::uint64_t>{1, 2, 3});

  const json canon = config_to_json(cfg);
  const RunConfig back = parse_config(canon);
  CHECK(config_to_json(back).dump() == canon.dump());
  CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("a manifest is accepted back as a config") {
  const RunConfig cfg = parse_config(minimal());
  const json manifest = make_manifest(cfg);
  CHECK(manifest.contains("config"));
  CHECK(manifest.contains("tool_version"));
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest["derived"]["f"].get<double>() == doctest::Approx(1.0));
  CHECK(manifest["derived"]["k0"].get<double>() ==
        doctest::Approx(2.0 * M_PI));
  CHECK(manifest["derived"]["kc2"]["re"].get<double>() ==
        doctest::Approx(4.0 * M_PI * M_PI));
  CHECK(manifest["derived"]["kc2"]["im"].get<double>() ==
        doctest::Approx(0.0));

  const RunConfig back = parse_config(manifest);
  CHECK(config_to_json(back).dump() == config_to_json(cfg).dump());
}

TEST_CASE("hash tracks content, seeds derive by fixed offsets") {
  const RunConfig a = parse_config(minimal());
  json j = minimal();
  j["problem"]["nu"] = 2.0;
  const RunConfig b = parse_config(j);
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a) == config_hash(parse_config(minimal())));

  const DerivedSeeds seeds = derive_seeds(5);
  CHECK(seeds.init_seed == 5);
  CHECK(seeds.sample_seed == 5 + 1000003);
  CHECK(seeds.split_seed == 5 + 2000003);
}

TEST_CASE("bad values are rejected at parse time") {
  json bad_eta = minimal();
  bad_eta["problem"]["eta"] = 1.5;
  CHECK_THROWS(parse_config(bad_eta));

  json bad_iters = minimal();
  bad_iters["training"]["iterations"] = 0;
  CHECK_THROWS(parse_config(bad_iters));

  json bad_dim = minimal();
  bad_dim["problem"]["upper"] = {1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS(parse_config(bad_dim));

  json bad_width = minimal();
  bad_width["network"]["hidden_widths"] = {0};
  CHECK_THROWS(parse_config(bad_width));
}
