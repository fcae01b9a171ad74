#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "helmpinn/runner.hpp"
#include "helmpinn/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Helmholtz PINN forward solver"};
  app.require_subcommand(1);

  std::string config, which, out, checkpoint, axis;
  std::vector<std::string> values;
  int resolution = 25;
  double half_range = 1.0;

  CLI::App* train = app.add_subcommand("train", "run one configured experiment");
  train->add_option("config", config, "config file")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "cross product of one axis and repeat seeds");
  sweep->add_option("config", config, "config file")->required();
  sweep->add_option("--axis", axis, "ppw|activation_scale|freeze|repeat")->required();
  sweep->add_option("--values", values, "axis values")->required()->expected(-1);

  CLI::App* oracle = app.add_subcommand("oracle", "write a reference field on the evaluation grid");
  oracle->add_option("config", config, "config file")->required();
  oracle->add_option("which", which, "analytic|modal|gf")->required();
  oracle->add_option("out", out, "output CSV path")->required();

  CLI::App* landscape = app.add_subcommand("landscape", "loss surface around a checkpoint");
  landscape->add_option("config", config, "config file")->required();
  landscape->add_option("checkpoint", checkpoint, "checkpoint file")->required();
  landscape->add_option("--resolution", resolution, "odd grid resolution");
  landscape->add_option("--half-range", half_range, "scan half range");

  CLI::App* version = app.add_subcommand("version", "print the tool version");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return helmpinn::cmd_train(config);
  if (sweep->parsed()) return helmpinn::cmd_sweep(config, axis, values);
  if (oracle->parsed()) return helmpinn::cmd_oracle(config, which, out);
  if (landscape->parsed())
    return helmpinn::cmd_landscape(config, checkpoint, resolution, half_range);
  if (version->parsed()) {
    std::cout << helmpinn::kToolName << " " << helmpinn::kVersion << "\n";
    return 0;
  }
  return 1;
}
