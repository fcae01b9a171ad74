#include "helmpinn/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "helmpinn/rng.hpp"

namespace helmpinn {

double relative_l2(const FieldOnPoints& pred, const FieldOnPoints& ref) {
  if (pred.points.rows() != ref.points.rows() ||
      pred.points.cols() != ref.points.cols() ||
      (pred.points - ref.points).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("fields are sampled on different points");
  const double num = (ref.p_r - pred.p_r).squaredNorm() +
                     (ref.p_i - pred.p_i).squaredNorm();
  const double den = ref.p_r.squaredNorm() + ref.p_i.squaredNorm();
  if (den == 0.0)
    throw std::invalid_argument("reference field is identically zero");
  return 100.0 * std::sqrt(num / den);
}

ErrorReport meaningful_check(const FieldOnPoints& pred,
                             const FieldOnPoints& ref,
                             const FieldOnPoints& gf) {
  if (gf.points.rows() != ref.points.rows() ||
      (gf.points - ref.points).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("fields are sampled on different points");
  ErrorReport r;
  r.e_rel_ref = relative_l2(pred, ref);
  // Both errors share the reference norm in the denominator, so the
  // comparison below weighs the two distances on the same scale.
  const double num = (pred.p_r - gf.p_r).squaredNorm() +
                     (pred.p_i - gf.p_i).squaredNorm();
  const double den = ref.p_r.squaredNorm() + ref.p_i.squaredNorm();
  r.e_rel_gf = 100.0 * std::sqrt(num / den);
  r.n_points = ref.size();
  r.meaningful = r.e_rel_ref < r.e_rel_gf;
  return r;
}

Eigen::VectorXd make_direction(const ParameterVector& params,
                               std::uint64_t seed, DirectionNorm norm) {
  const Eigen::Index n = params.values.size();
  Eigen::VectorXd dir(n);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) dir[i] = rng.normal();

  if (norm == DirectionNorm::GlobalNorm) {
    const double dn = dir.norm();
    dir *= dn > 0.0 ? params.values.norm() / dn : 0.0;
    return dir;
  }
  for (const LayerExtent& ext : params.layout.layers) {
    Eigen::Map<const Eigen::MatrixXd> w(params.values.data() + ext.weight_offset,
                                        ext.out, ext.in);
    Eigen::Map<Eigen::MatrixXd> dw(dir.data() + ext.weight_offset, ext.out,
                                   ext.in);
    for (Eigen::Index r = 0; r < ext.out; ++r) {
      const double dn = dw.row(r).norm();
      dw.row(r) *= dn > 0.0 ? w.row(r).norm() / dn : 0.0;
    }
    auto b = params.values.segment(ext.bias_offset, ext.out);
    auto db = dir.segment(ext.bias_offset, ext.out);
    const double dn = db.norm();
    db *= dn > 0.0 ? b.norm() / dn : 0.0;
  }
  return dir;
}

LandscapeGrid landscape_grid_with_directions(
    const ParameterVector& params, const NetworkSpec& spec,
    const HelmholtzProblem& problem, const SampleSet& samples,
    const LossWeights& weights, double half_range, int resolution,
    const Eigen::VectorXd& d1, const Eigen::VectorXd& d2) {
  if (resolution < 3 || resolution % 2 == 0)
    throw std::invalid_argument("resolution must be odd and >= 3");
  if (!(half_range > 0.0))
    throw std::invalid_argument("half_range must be positive");
  if (d1.size() != params.values.size() || d2.size() != params.values.size())
    throw std::invalid_argument("direction size mismatch");

  LandscapeGrid grid;
  const int c = (resolution - 1) / 2;
  const double step = half_range / c;
  grid.alphas.resize(resolution);
  grid.betas.resize(resolution);
  for (int i = 0; i < resolution; ++i)
    grid.alphas[i] = grid.betas[i] = (i - c) * step;

  grid.loss.resize(resolution, resolution);
  ParameterVector trial = params;
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      trial.values = params.values + grid.alphas[i] * d1 + grid.betas[j] * d2;
      double value;
      try {
        value = total_loss(trial, spec, problem, samples, weights).total;
      } catch (const std::exception&) {
        value = std::numeric_limits<double>::infinity();
      }
      grid.loss(i, j) = std::isfinite(value)
                            ? value
                            : std::numeric_limits<double>::infinity();
    }
  return grid;
}

LandscapeGrid landscape_grid(const ParameterVector& params,
                             const NetworkSpec& spec,
                             const HelmholtzProblem& problem,
                             const SampleSet& samples,
                             const LossWeights& weights, double half_range,
                             int resolution,
                             std::pair<std::uint64_t, std::uint64_t> seeds,
                             DirectionNorm norm) {
  const Eigen::VectorXd d1 = make_direction(params, seeds.first, norm);
  const Eigen::VectorXd d2 = make_direction(params, seeds.second, norm);
  LandscapeGrid grid = landscape_grid_with_directions(
      params, spec, problem, samples, weights, half_range, resolution, d1, d2);
  grid.direction_seeds = seeds;
  grid.normalization = norm;
  return grid;
}

EigenvalueEstimate power_iteration_hvp(const GradientFn& grad_at,
                                       const Eigen::VectorXd& center,
                                       const std::vector<std::uint8_t>& mask,
                                       double h, int iters, double tol,
                                       std::uint64_t seed) {
  const Eigen::Index n = center.size();
  if (static_cast<Eigen::Index>(mask.size()) != n)
    throw std::invalid_argument("mask size mismatch");
  if (!(h > 0.0)) throw std::invalid_argument("step h must be positive");

  auto apply_mask = [&](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (!mask[static_cast<std::size_t>(i)]) v[i] = 0.0;
  };

  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  apply_mask(v);
  const double vn = v.norm();
  if (vn == 0.0)
    throw std::invalid_argument("mask leaves no trainable coordinates");
  v /= vn;

  EigenvalueEstimate est;
  double best = -std::numeric_limits<double>::infinity();
  for (int it = 1; it <= iters; ++it) {
    Eigen::VectorXd hv =
        (grad_at(center + h * v) - grad_at(center - h * v)) / (2.0 * h);
    apply_mask(hv);
    const double ray = v.dot(hv);
    best = std::max(best, ray);
    est.value = best;
    est.iterations = it;
    est.residual = (hv - ray * v).norm();
    if (est.residual <= tol) {
      est.converged = true;
      break;
    }
    const double hn = hv.norm();
    if (hn == 0.0) {  // zero curvature along every probe direction
      est.converged = true;
      break;
    }
    v = hv / hn;
  }
  return est;
}

EigenvalueEstimate hessian_top_eigenvalue(const ParameterVector& params,
                                          const NetworkSpec& spec,
                                          const HelmholtzProblem& problem,
                                          const SampleSet& samples,
                                          const LossWeights& weights,
                                          int iters, double tol,
                                          std::uint64_t seed) {
  ParameterVector trial = params;
  Eigen::VectorXd grad(params.values.size());
  GradientFn grad_at = [&](const Eigen::VectorXd& values) {
    trial.values = values;
    loss_gradient(trial, spec, problem, samples, weights, grad);
    return grad;
  };
  const double h = 1e-4 * (1.0 + params.values.cwiseAbs().maxCoeff());
  return power_iteration_hvp(grad_at, params.values, params.trainable, h,
                             iters, tol, seed);
}

} // namespace helmpinn
