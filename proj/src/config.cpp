#include "helmpinn/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <nlohmann/json.hpp>

#include "helmpinn/version.hpp"

namespace helmpinn {

using nlohmann::json;

namespace {

std::string joined(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_keys(const json& j, const std::string& path,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key: " + joined(path, item.key()));
  }
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double req_number(const json& j, const std::string& path, const char* key) {
  const json* v = find(j, key);
  if (!v) throw ConfigError(joined(path, key) + " required");
  if (!v->is_number())
    throw ConfigError(joined(path, key) + ": expected a number");
  return v->get<double>();
}

double opt_number(const json& j, const std::string& path, const char* key,
                  double fallback) {
  return find(j, key) ? req_number(j, path, key) : fallback;
}

int opt_int(const json& j, const std::string& path, const char* key,
            int fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer())
    throw ConfigError(joined(path, key) + ": expected an integer");
  return v->get<int>();
}

std::uint64_t as_seed(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(where + ": expected a nonnegative integer seed");
}

std::uint64_t opt_seed(const json& j, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  const json* v = find(j, key);
  return v ? as_seed(*v, joined(path, key)) : fallback;
}

bool opt_bool(const json& j, const std::string& path, const char* key,
              bool fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_boolean())
    throw ConfigError(joined(path, key) + ": expected a boolean");
  return v->get<bool>();
}

std::string opt_string(const json& j, const std::string& path, const char* key,
                       const std::string& fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_string())
    throw ConfigError(joined(path, key) + ": expected a string");
  return v->get<std::string>();
}

Point parse_point(const json& v, const std::string& where) {
  if (!v.is_array() || (v.size() != 2 && v.size() != 3))
    throw ConfigError(where + ": expected an array of 2 or 3 numbers");
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ConfigError(where + ": expected an array of numbers");
    p[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return p;
}

ActivationSpec parse_activation(const std::string& s, const std::string& where) {
  if (s == "tanh") return ActivationSpec::tanh();
  if (s == "linear") return ActivationSpec::linear();
  if (s == "sin") return ActivationSpec::sin_scaled(1.0);
  if (s.rfind("sin:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double scale = std::stod(s.substr(4), &used);
      if (used == s.size() - 4 && scale > 0.0)
        return ActivationSpec::sin_scaled(scale);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(where + ": expected sin|sin:<scale>|tanh|linear, got \"" +
                    s + "\"");
}

std::string activation_to_string(const ActivationSpec& act) {
  switch (act.kind) {
    case ActivationKind::Tanh:
      return "tanh";
    case ActivationKind::Linear:
      return "linear";
    case ActivationKind::SinScaled:
      break;
  }
  if (act.scale == 1.0) return "sin";
  json scale = act.scale;  // shortest round-trip formatting
  return "sin:" + scale.dump();
}

FreezePolicy parse_freeze(const std::string& s, const std::string& where) {
  if (s == "none") return FreezePolicy::none();
  for (const char* prefix : {"all_but_first:", "all_but_last:"}) {
    if (s.rfind(prefix, 0) != 0) continue;
    try {
      std::size_t used = 0;
      const std::string tail = s.substr(std::string(prefix).size());
      const int k = std::stoi(tail, &used);
      if (used == tail.size() && k >= 1)
        return prefix[8] == 'f' ? FreezePolicy::all_but_first(k)
                                : FreezePolicy::all_but_last(k);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(where +
                    ": expected none|all_but_first:<k>|all_but_last:<k>");
}

std::string freeze_to_string(const FreezePolicy& p) {
  switch (p.kind) {
    case FreezePolicy::Kind::None:
      return "none";
    case FreezePolicy::Kind::AllButFirstK:
      return "all_but_first:" + std::to_string(p.k);
    case FreezePolicy::Kind::AllButLastK:
      return "all_but_last:" + std::to_string(p.k);
  }
  return "none";
}

HelmholtzProblem parse_problem(const json& j) {
  expect_keys(j, "problem",
              {"lower", "upper", "c0", "eta", "nu", "L_ref", "source",
               "bc_grouping"});
  HelmholtzProblem prob;

  const json* upper = find(j, "upper");
  if (!upper) throw ConfigError("problem.upper required");
  prob.domain.upper = parse_point(*upper, "problem.upper");
  prob.domain.dim = static_cast<int>(prob.domain.upper.size());
  if (const json* lower = find(j, "lower")) {
    prob.domain.lower = parse_point(*lower, "problem.lower");
    if (prob.domain.lower.size() != prob.domain.upper.size())
      throw ConfigError("problem.lower: dimension differs from problem.upper");
  } else {
    prob.domain.lower = Point::Zero(prob.domain.dim);
  }

  if (!find(j, "nu")) throw ConfigError("problem.nu required");
  prob.medium.nu = req_number(j, "problem", "nu");
  prob.medium.c0 = opt_number(j, "problem", "c0", 1.0);
  prob.medium.eta = opt_number(j, "problem", "eta", 0.0);
  prob.medium.L_ref = opt_number(j, "problem", "L_ref", 1.0);

  prob.source.location = prob.domain.center();
  prob.source.cosine_wavenumber = prob.medium.k0();
  prob.source.sharpness = std::numeric_limits<double>::infinity();
  if (const json* src = find(j, "source")) {
    expect_keys(*src, "problem.source",
                {"sharpness", "location", "cosine_wavenumber"});
    if (const json* sh = find(*src, "sharpness")) {
      if (sh->is_string() && sh->get<std::string>() == "inf")
        prob.source.sharpness = std::numeric_limits<double>::infinity();
      else if (sh->is_number())
        prob.source.sharpness = sh->get<double>();
      else
        throw ConfigError(
            "problem.source.sharpness: expected a number or \"inf\"");
    }
    if (const json* loc = find(*src, "location"))
      prob.source.location = parse_point(*loc, "problem.source.location");
    prob.source.cosine_wavenumber = opt_number(
        *src, "problem.source", "cosine_wavenumber", prob.medium.k0());
  }

  const std::string grouping =
      opt_string(j, "problem", "bc_grouping", "single");
  if (grouping == "single")
    prob.bc_grouping = BcGrouping::SingleSet;
  else if (grouping == "per_face")
    prob.bc_grouping = BcGrouping::PerFaceSets;
  else
    throw ConfigError("problem.bc_grouping: expected single|per_face");
  return prob;
}

NetworkSpec parse_network(const json& j, int dim) {
  expect_keys(j, "network", {"hidden_widths", "activations", "init_seed"});
  NetworkSpec spec;
  spec.input_dim = dim;
  spec.output_dim = 2;
  spec.output_activation = ActivationSpec::linear();

  const json* widths = find(j, "hidden_widths");
  if (!widths) throw ConfigError("network.hidden_widths required");
  if (!widths->is_array() || widths->empty())
    throw ConfigError("network.hidden_widths: expected a nonempty array");
  for (const auto& w : *widths) {
    if (!w.is_number_integer() || w.get<int>() < 1)
      throw ConfigError("network.hidden_widths: widths must be integers >= 1");
    spec.hidden_widths.push_back(w.get<int>());
  }

  const json* acts = find(j, "activations");
  if (!acts) {
    spec.hidden_activations.assign(spec.hidden_widths.size(),
                                   ActivationSpec::sin_scaled(1.0));
  } else if (acts->is_string()) {
    spec.hidden_activations.assign(
        spec.hidden_widths.size(),
        parse_activation(acts->get<std::string>(), "network.activations"));
  } else if (acts->is_array()) {
    if (acts->size() != spec.hidden_widths.size())
      throw ConfigError(
          "network.activations: need one entry per hidden layer");
    for (const auto& a : *acts) {
      if (!a.is_string())
        throw ConfigError("network.activations: expected strings");
      spec.hidden_activations.push_back(
          parse_activation(a.get<std::string>(), "network.activations"));
    }
  } else {
    throw ConfigError("network.activations: expected a string or an array");
  }
  spec.init_seed = opt_seed(j, "network", "init_seed", 1);
  return spec;
}

TrainConfig parse_training(const json& j) {
  expect_keys(j, "training",
              {"iterations", "learning_rate", "adam_beta1", "adam_beta2",
               "adam_eps", "log_every", "weights", "seed", "freeze"});
  TrainConfig t;
  const json* iters = find(j, "iterations");
  if (!iters) throw ConfigError("training.iterations required");
  if (!iters->is_number_integer())
    throw ConfigError("training.iterations: expected an integer");
  t.iterations = iters->get<int>();
  t.learning_rate = opt_number(j, "training", "learning_rate", 1e-3);
  t.adam_beta1 = opt_number(j, "training", "adam_beta1", 0.9);
  t.adam_beta2 = opt_number(j, "training", "adam_beta2", 0.999);
  t.adam_eps = opt_number(j, "training", "adam_eps", 1e-8);
  t.log_every = opt_int(j, "training", "log_every", 100);
  if (const json* w = find(j, "weights")) {
    expect_keys(*w, "training.weights", {"pde_r", "pde_i", "bc_r", "bc_i"});
    t.loss_weights.w_pde_r = opt_number(*w, "training.weights", "pde_r", 1.0);
    t.loss_weights.w_pde_i = opt_number(*w, "training.weights", "pde_i", 1.0);
    t.loss_weights.w_bc_r = opt_number(*w, "training.weights", "bc_r", 1.0);
    t.loss_weights.w_bc_i = opt_number(*w, "training.weights", "bc_i", 1.0);
  }
  t.seed = opt_seed(j, "training", "seed", 0);
  t.freeze_policy =
      parse_freeze(opt_string(j, "training", "freeze", "none"),
                   "training.freeze");
  return t;
}

PretrainSettings parse_pretrain(const json& j) {
  expect_keys(j, "pretrain",
              {"iterations", "learning_rate", "train_fraction",
               "test_fraction", "seed", "log_every", "source"});
  PretrainSettings p;
  p.iterations = opt_int(j, "pretrain", "iterations", 50000);
  p.learning_rate = opt_number(j, "pretrain", "learning_rate", 1e-3);
  p.train_fraction = opt_number(j, "pretrain", "train_fraction", 0.007);
  p.test_fraction = opt_number(j, "pretrain", "test_fraction", 0.003);
  p.seed = opt_seed(j, "pretrain", "seed", 0);
  p.log_every = opt_int(j, "pretrain", "log_every", 100);
  const std::string src = opt_string(j, "pretrain", "source", "gf");
  if (src == "gf")
    p.data_source = PretrainSettings::DataSource::GF;
  else if (src == "analytic")
    p.data_source = PretrainSettings::DataSource::Analytic;
  else if (src == "modal")
    p.data_source = PretrainSettings::DataSource::Modal;
  else
    throw ConfigError("pretrain.source: expected gf|analytic|modal");
  return p;
}

} // namespace

void RunConfig::validate() const {
  problem.validate();
  network.validate();
  if (network.input_dim != problem.domain.dim)
    throw ConfigError("network input dimension differs from the domain");
  if (!(ppw > 0.0)) throw ConfigError("sampling.ppw must be positive");
  training.validate();
  if (pretrain) {
    if (pretrain->iterations < 1)
      throw ConfigError("pretrain.iterations must be >= 1");
    if (!(pretrain->learning_rate > 0.0))
      throw ConfigError("pretrain.learning_rate must be positive");
    if (!(pretrain->train_fraction > 0.0) ||
        !(pretrain->test_fraction > 0.0) ||
        pretrain->train_fraction + pretrain->test_fraction > 1.0)
      throw ConfigError(
          "pretrain fractions must be positive with sum <= 1");
    if (pretrain->log_every < 1)
      throw ConfigError("pretrain.log_every must be >= 1");
  }
  if (evaluation.grid_per_axis < 2)
    throw ConfigError("evaluation.grid_per_axis must be >= 2");
  if (outputs.checkpoint_every < 0)
    throw ConfigError("outputs.checkpoint_every must be >= 0");
  if (outputs.directory.empty())
    throw ConfigError("outputs.directory must not be empty");
}

RunConfig parse_config(const json& root) {
  if (!root.is_object()) throw ConfigError("config must be an object");
  const json* body = &root;
  if (const json* wrapped = find(root, "config")) {
    // A manifest from a previous run: the resolved config plus audit keys.
    expect_keys(root, "", {"config", "derived", "tool_version", "config_hash"});
    if (!wrapped->is_object())
      throw ConfigError("config: expected an object");
    body = wrapped;
  }
  expect_keys(*body, "",
              {"problem", "network", "sampling", "training", "pretrain",
               "evaluation", "outputs", "sweep", "landscape"});

  const json* problem = find(*body, "problem");
  if (!problem) throw ConfigError("problem required");
  const json* network = find(*body, "network");
  if (!network) throw ConfigError("network required");
  const json* training = find(*body, "training");
  if (!training) throw ConfigError("training required");

  RunConfig cfg;
  cfg.problem = parse_problem(*problem);
  cfg.network = parse_network(*network, cfg.problem.domain.dim);
  cfg.training = parse_training(*training);

  if (const json* sampling = find(*body, "sampling")) {
    expect_keys(*sampling, "sampling", {"ppw", "seed"});
    cfg.ppw = opt_number(*sampling, "sampling", "ppw", 6.0);
    cfg.sample_seed = opt_seed(*sampling, "sampling", "seed", 0);
  }
  if (const json* pre = find(*body, "pretrain"))
    cfg.pretrain = parse_pretrain(*pre);
  if (const json* ev = find(*body, "evaluation")) {
    expect_keys(*ev, "evaluation", {"grid_per_axis", "compare_gf"});
    cfg.evaluation.grid_per_axis = opt_int(*ev, "evaluation", "grid_per_axis", 41);
    cfg.evaluation.compare_gf = opt_bool(*ev, "evaluation", "compare_gf", false);
  }
  if (const json* out = find(*body, "outputs")) {
    expect_keys(*out, "outputs", {"directory", "checkpoint_every"});
    cfg.outputs.directory = opt_string(*out, "outputs", "directory", "run");
    cfg.outputs.checkpoint_every =
        opt_int(*out, "outputs", "checkpoint_every", 0);
  }
  if (const json* sw = find(*body, "sweep")) {
    expect_keys(*sw, "sweep", {"seeds"});
    if (const json* seeds = find(*sw, "seeds")) {
      if (!seeds->is_array())
        throw ConfigError("sweep.seeds: expected an array");
      for (const auto& s : *seeds)
        cfg.sweep.seeds.push_back(as_seed(s, "sweep.seeds"));
    }
  }
  if (const json* ls = find(*body, "landscape")) {
    expect_keys(*ls, "landscape", {"seed1", "seed2"});
    cfg.landscape.seed1 = opt_seed(*ls, "landscape", "seed1", 1001);
    cfg.landscape.seed2 = opt_seed(*ls, "landscape", "seed2", 2002);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return parse_config(root);
}

json config_to_json(const RunConfig& config) {
  json j;
  const HelmholtzProblem& prob = config.problem;
  json& p = j["problem"];
  p["lower"] = std::vector<double>(prob.domain.lower.data(),
                                   prob.domain.lower.data() + prob.domain.dim);
  p["upper"] = std::vector<double>(prob.domain.upper.data(),
                                   prob.domain.upper.data() + prob.domain.dim);
  p["c0"] = prob.medium.c0;
  p["eta"] = prob.medium.eta;
  p["nu"] = prob.medium.nu;
  p["L_ref"] = prob.medium.L_ref;
  json& src = p["source"];
  if (prob.source.is_infinitely_wide())
    src["sharpness"] = "inf";
  else
    src["sharpness"] = prob.source.sharpness;
  src["location"] =
      std::vector<double>(prob.source.location.data(),
                          prob.source.location.data() + prob.domain.dim);
  src["cosine_wavenumber"] = prob.source.cosine_wavenumber;
  p["bc_grouping"] =
      prob.bc_grouping == BcGrouping::SingleSet ? "single" : "per_face";

  json& n = j["network"];
  n["hidden_widths"] = config.network.hidden_widths;
  std::vector<std::string> acts;
  for (const auto& a : config.network.hidden_activations)
    acts.push_back(activation_to_string(a));
  n["activations"] = acts;
  n["init_seed"] = config.network.init_seed;

  j["sampling"]["ppw"] = config.ppw;
  j["sampling"]["seed"] = config.sample_seed;

  json& t = j["training"];
  t["iterations"] = config.training.iterations;
  t["learning_rate"] = config.training.learning_rate;
  t["adam_beta1"] = config.training.adam_beta1;
  t["adam_beta2"] = config.training.adam_beta2;
  t["adam_eps"] = config.training.adam_eps;
  t["log_every"] = config.training.log_every;
  t["weights"]["pde_r"] = config.training.loss_weights.w_pde_r;
  t["weights"]["pde_i"] = config.training.loss_weights.w_pde_i;
  t["weights"]["bc_r"] = config.training.loss_weights.w_bc_r;
  t["weights"]["bc_i"] = config.training.loss_weights.w_bc_i;
  t["seed"] = config.training.seed;
  t["freeze"] = freeze_to_string(config.training.freeze_policy);

  if (config.pretrain) {
    json& pre = j["pretrain"];
    pre["iterations"] = config.pretrain->iterations;
    pre["learning_rate"] = config.pretrain->learning_rate;
    pre["train_fraction"] = config.pretrain->train_fraction;
    pre["test_fraction"] = config.pretrain->test_fraction;
    pre["seed"] = config.pretrain->seed;
    pre["log_every"] = config.pretrain->log_every;
    switch (config.pretrain->data_source) {
      case PretrainSettings::DataSource::GF:
        pre["source"] = "gf";
        break;
      case PretrainSettings::DataSource::Analytic:
        pre["source"] = "analytic";
        break;
      case PretrainSettings::DataSource::Modal:
        pre["source"] = "modal";
        break;
    }
  }

  j["evaluation"]["grid_per_axis"] = config.evaluation.grid_per_axis;
  j["evaluation"]["compare_gf"] = config.evaluation.compare_gf;
  j["outputs"]["directory"] = config.outputs.directory;
  j["outputs"]["checkpoint_every"] = config.outputs.checkpoint_every;
  j["sweep"]["seeds"] = config.sweep.seeds;
  j["landscape"]["seed1"] = config.landscape.seed1;
  j["landscape"]["seed2"] = config.landscape.seed2;
  return j;
}

std::uint64_t config_hash(const RunConfig& config) {
  const std::string dump = config_to_json(config).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json make_manifest(const RunConfig& config) {
  json m;
  m["config"] = config_to_json(config);
  const auto kc2 = config.problem.medium.kc2();
  m["derived"]["f"] = config.problem.medium.f();
  m["derived"]["k0"] = config.problem.medium.k0();
  m["derived"]["kc2"]["re"] = kc2.real();
  m["derived"]["kc2"]["im"] = kc2.imag();
  m["tool_version"] = kVersion;
  m["config_hash"] = config_hash(config);
  return m;
}

DerivedSeeds derive_seeds(std::uint64_t repeat_seed) {
  return {repeat_seed, repeat_seed + 1000003ull, repeat_seed + 2000003ull};
}

} // namespace helmpinn
