#include "helmpinn/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>

#include "helmpinn/analysis.hpp"
#include "helmpinn/checkpoint.hpp"
#include "helmpinn/config.hpp"
#include "helmpinn/loss.hpp"
#include "helmpinn/oracle.hpp"
#include "helmpinn/training.hpp"

namespace helmpinn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

FieldOnPoints predict_field(const ParameterVector& params,
                            const NetworkSpec& spec,
                            const Eigen::MatrixXd& pts) {
  FieldOnPoints f;
  f.points = pts;
  const Eigen::MatrixX2d out = forward_batch(params, spec, pts);
  f.p_r = out.col(0);
  f.p_i = out.col(1);
  return f;
}

/// Reference oracle on the grid: closed form when the infinitely wide
/// source admits it, modal expansion otherwise; empty when neither applies
/// (for example an undamped resonance).
std::optional<FieldOnPoints> reference_field(
    const HelmholtzProblem& problem, const std::vector<Eigen::VectorXd>& axes,
    const Eigen::MatrixXd& grid_pts) {
  if (problem.source.is_infinitely_wide()) {
    try {
      return analytic_infty(problem).eval_field(grid_pts);
    } catch (const std::exception&) {
    }
  }
  try {
    return modal_solve(problem, default_mode_counts(problem)).eval_grid(axes);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Pretraining data lives on the collocation points, so its size follows
/// ppw like the rest of the training set.
FieldOnPoints pretrain_data_field(const RunConfig& cfg,
                                  const SampleSet& samples) {
  Eigen::Index total = samples.interior.rows();
  for (const FaceSamples& f : samples.boundary) total += f.points.rows();
  Eigen::MatrixXd pts(total, samples.interior.cols());
  pts.topRows(samples.interior.rows()) = samples.interior;
  Eigen::Index row = samples.interior.rows();
  for (const FaceSamples& f : samples.boundary) {
    pts.middleRows(row, f.points.rows()) = f.points;
    row += f.points.rows();
  }
  switch (cfg.pretrain->data_source) {
    case PretrainSettings::DataSource::GF:
      return gf_convolve(cfg.problem, default_gf_grid(cfg.problem), pts);
    case PretrainSettings::DataSource::Analytic:
      return analytic_infty(cfg.problem).eval_field(pts);
    case PretrainSettings::DataSource::Modal:
      return modal_solve(cfg.problem, default_mode_counts(cfg.problem))
          .eval_field(pts);
  }
  throw std::logic_error("unreachable pretrain source");
}

struct CellResult {
  double e_rel_ref = kNan;
  double e_rel_gf = kNan;
  std::optional<int> onset;
  double wall_time_s = 0.0;
};

CellResult run_single(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = cfg.outputs.directory;
  fs::create_directories(dir);
  write_text(dir / "manifest.json", make_manifest(cfg).dump(2) + "\n");

  const SampleSet samples = sample(cfg.problem, cfg.ppw, cfg.sample_seed);
  export_points(samples, (dir / "points.txt").string());

  const std::vector<Eigen::VectorXd> axes =
      make_eval_axes(cfg.problem.domain, cfg.evaluation.grid_per_axis);
  const Eigen::MatrixXd grid_pts = tensor_points(axes);
  const std::optional<FieldOnPoints> ref =
      reference_field(cfg.problem, axes, grid_pts);

  // The kernel sum costs O(cells x queries), so the Green's-function
  // comparison runs on a probe capped at 9 points per axis. It is also
  // only defined in 3D.
  const bool want_gf =
      cfg.evaluation.compare_gf && cfg.problem.domain.dim == 3;
  const bool coarse_probe = want_gf && cfg.evaluation.grid_per_axis > 9;
  const std::vector<Eigen::VectorXd> cmp_axes =
      coarse_probe ? make_eval_axes(cfg.problem.domain, 9) : axes;
  const Eigen::MatrixXd cmp_pts =
      coarse_probe ? tensor_points(cmp_axes) : grid_pts;
  std::optional<FieldOnPoints> gf;
  if (want_gf)
    gf = gf_convolve(cfg.problem, default_gf_grid(cfg.problem), cmp_pts);

  const NetworkSpec& spec = cfg.network;
  ErrorFn error_fn;
  if (ref)
    error_fn = [&](const ParameterVector& p) {
      return relative_l2(predict_field(p, spec, grid_pts), *ref);
    };

  ParameterVector init;
  if (cfg.pretrain) {
    PretrainConfig pc;
    pc.iterations = cfg.pretrain->iterations;
    pc.learning_rate = cfg.pretrain->learning_rate;
    pc.data = pretrain_data_field(cfg, samples);
    pc.train_fraction = cfg.pretrain->train_fraction;
    pc.test_fraction = cfg.pretrain->test_fraction;
    pc.seed = cfg.pretrain->seed;
    pc.log_every = cfg.pretrain->log_every;
    const PretrainRecord pre = pretrain_supervised(spec, pc);

    std::string csv = "iteration,mse\n";
    for (const auto& [it, mse] : pre.mse_history)
      csv += std::to_string(it) + "," + fmt17(mse) + "\n";
    write_text(dir / "pretrain.csv", csv);
    json pj;
    pj["test_mse"] = pre.test_mse;
    pj["wall_time_s"] = pre.wall_time_s;
    write_text(dir / "pretrain.json", pj.dump(2) + "\n");
    save_checkpoint((dir / "pretrained.ckpt").string(), pre.params, spec);
    init = pre.params;
  } else {
    init = init_glorot(spec);
  }

  StepCallback step_fn;
  if (cfg.outputs.checkpoint_every > 0)
    step_fn = [&](int it, const ParameterVector& p) {
      if (it % cfg.outputs.checkpoint_every == 0 && it != cfg.training.iterations)
        save_checkpoint(
            (dir / ("checkpoint_" + std::to_string(it) + ".ckpt")).string(), p,
            spec);
    };

  const TrainingRecord rec = train_pinn(spec, cfg.problem, samples,
                                        cfg.training, init, error_fn, step_fn);
  save_checkpoint((dir / "final.ckpt").string(), rec.final_params, spec);

  std::string csv = "iteration,pde_r,pde_i,bc_r,bc_i,total,e_rel\n";
  for (std::size_t i = 0; i < rec.loss_history.size(); ++i) {
    const auto& [it, lb] = rec.loss_history[i];
    const double e_rel = error_fn ? rec.error_history[i].second : kNan;
    csv += std::to_string(it) + "," + fmt17(lb.pde_r) + "," + fmt17(lb.pde_i) +
           "," + fmt17(lb.bc_r) + "," + fmt17(lb.bc_i) + "," + fmt17(lb.total) +
           "," + fmt17(e_rel) + "\n";
  }
  write_text(dir / "loss.csv", csv);

  CellResult result;
  result.onset = rec.onset_iteration;
  const FieldOnPoints pred = predict_field(rec.final_params, spec, grid_pts);
  if (ref) result.e_rel_ref = relative_l2(pred, *ref);
  bool meaningful = false;
  Eigen::Index n_points = grid_pts.rows();
  double row_e_ref = result.e_rel_ref;
  if (ref && gf) {
    // One report, one point set: when the probe is coarser than the
    // evaluation grid, all three columns come from the probe.
    const std::optional<FieldOnPoints> cmp_ref =
        coarse_probe ? reference_field(cfg.problem, cmp_axes, cmp_pts) : ref;
    if (cmp_ref) {
      const ErrorReport rep = meaningful_check(
          predict_field(rec.final_params, spec, cmp_pts), *cmp_ref, *gf);
      row_e_ref = rep.e_rel_ref;
      result.e_rel_gf = rep.e_rel_gf;
      meaningful = rep.meaningful;
      n_points = rep.n_points;
    }
  }
  write_text(dir / "errors.csv",
             "e_rel_ref,e_rel_gf,n_points,meaningful\n" + fmt17(row_e_ref) +
                 "," + fmt17(result.e_rel_gf) + "," +
                 std::to_string(n_points) + "," + (meaningful ? "1" : "0") +
                 "\n");

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::cout << "run " << dir.string()
            << ": e_rel_ref=" << fmt17(result.e_rel_ref) << " onset="
            << (result.onset ? std::to_string(*result.onset) : "none")
            << " wall=" << fmt17(result.wall_time_s) << "s\n";
  return result;
}

void apply_derived_seeds(RunConfig& cfg, std::uint64_t repeat_seed) {
  const DerivedSeeds ds = derive_seeds(repeat_seed);
  cfg.network.init_seed = ds.init_seed;
  cfg.sample_seed = ds.sample_seed;
  if (cfg.pretrain) cfg.pretrain->seed = ds.split_seed;
}

int fail(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 1;
}

} // namespace

int cmd_train(const std::string& config_path) {
  try {
    run_single(load_config(config_path));
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::vector<std::string>& values) {
  try {
    const RunConfig base = load_config(config_path);
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    if (axis != "ppw" && axis != "activation_scale" && axis != "freeze" &&
        axis != "repeat")
      throw ConfigError("unknown sweep axis: " + axis);

    // Each cell re-enters the strict parser, so bad values die up front.
    const json base_json = config_to_json(base);
    struct Cell {
      std::string value;
      std::uint64_t seed;
      bool derive;
      RunConfig cfg;
    };
    std::vector<Cell> cells;
    for (const std::string& value : values) {
      json j = base_json;
      std::uint64_t repeat_seed = 0;
      if (axis == "ppw") {
        try {
          j["sampling"]["ppw"] = std::stod(value);
        } catch (const std::exception&) {
          throw ConfigError("sweep value is not a number: " + value);
        }
      } else if (axis == "activation_scale") {
        j["network"]["activations"] = "sin:" + value;
      } else if (axis == "freeze") {
        j["training"]["freeze"] = value;
      } else {  // repeat: the values are the seeds
        try {
          repeat_seed = std::stoull(value);
        } catch (const std::exception&) {
          throw ConfigError("sweep value is not a seed: " + value);
        }
      }
      RunConfig cell_cfg = parse_config(j);
      if (axis == "repeat") {
        cells.push_back({value, repeat_seed, true, cell_cfg});
      } else if (base.sweep.seeds.empty()) {
        cells.push_back({value, base.training.seed, false, cell_cfg});
      } else {
        for (std::uint64_t s : base.sweep.seeds)
          cells.push_back({value, s, true, cell_cfg});
      }
    }

    const fs::path root = base.outputs.directory;
    fs::create_directories(root);
    std::string summary = "value,seed,e_rel_ref,e_rel_gf,onset,wall_time_s\n";
    for (Cell& cell : cells) {
      RunConfig cfg = cell.cfg;
      if (cell.derive) apply_derived_seeds(cfg, cell.seed);
      cfg.outputs.directory =
          (root / (axis + "=" + cell.value + "_seed=" +
                   std::to_string(cell.seed)))
              .string();
      std::string row = cell.value + "," + std::to_string(cell.seed) + ",";
      try {
        const CellResult r = run_single(cfg);
        row += fmt17(r.e_rel_ref) + "," + fmt17(r.e_rel_gf) + "," +
               (r.onset ? std::to_string(*r.onset) : "none") + "," +
               fmt17(r.wall_time_s);
      } catch (const std::exception& e) {
        std::cerr << "cell " << cfg.outputs.directory << " failed: "
                  << e.what() << "\n";
        row += "nan,nan,none,nan";
      }
      summary += row + "\n";
    }
    write_text(root / "summary.csv", summary);
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int cmd_oracle(const std::string& config_path, const std::string& which,
               const std::string& points_out) {
  try {
    const RunConfig cfg = load_config(config_path);
    const std::vector<Eigen::VectorXd> axes =
        make_eval_axes(cfg.problem.domain, cfg.evaluation.grid_per_axis);
    FieldOnPoints field;
    if (which == "analytic")
      field = analytic_infty(cfg.problem).eval_field(tensor_points(axes));
    else if (which == "modal")
      field = modal_solve(cfg.problem, default_mode_counts(cfg.problem))
                  .eval_grid(axes);
    else if (which == "gf")
      field = gf_convolve(cfg.problem, default_gf_grid(cfg.problem),
                          tensor_points(axes));
    else
      throw ConfigError("unknown oracle: " + which);
    write_field_csv(field, points_out);
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int cmd_landscape(const std::string& config_path,
                  const std::string& checkpoint_path, int resolution,
                  double half_range) {
  try {
    const RunConfig cfg = load_config(config_path);
    const ParameterVector params =
        load_checkpoint(checkpoint_path, cfg.network);
    const SampleSet samples = sample(cfg.problem, cfg.ppw, cfg.sample_seed);
    const LandscapeGrid grid = landscape_grid(
        params, cfg.network, cfg.problem, samples,
        cfg.training.loss_weights, half_range, resolution,
        {cfg.landscape.seed1, cfg.landscape.seed2}, DirectionNorm::FilterNorm);

    const fs::path dir = cfg.outputs.directory;
    fs::create_directories(dir);
    std::string csv;
    for (Eigen::Index i = 0; i < grid.loss.rows(); ++i) {
      for (Eigen::Index j = 0; j < grid.loss.cols(); ++j)
        csv += fmt17(grid.loss(i, j)) + (j + 1 < grid.loss.cols() ? "," : "");
      csv += "\n";
    }
    write_text(dir / "landscape.csv", csv);

    json side;
    side["seed1"] = grid.direction_seeds.first;
    side["seed2"] = grid.direction_seeds.second;
    side["half_range"] = half_range;
    side["resolution"] = resolution;
    side["normalization"] = "filter_norm";
    side["alphas"] = std::vector<double>(grid.alphas.data(),
                                         grid.alphas.data() + grid.alphas.size());
    side["checkpoint"] = checkpoint_path;
    write_text(dir / "landscape.json", side.dump(2) + "\n");
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

} // namespace helmpinn
