#include "helmpinn/loss.hpp"

#include <cmath>
#include <stdexcept>

#include "helmpinn/propagation.hpp"

namespace helmpinn {

namespace {

constexpr Eigen::Index kChunk = 256;

// Shared sweep for total_loss and loss_gradient: the adjoint of the mean
// squared residuals is assembled per chunk and pushed through
// backward_chunk when grad != nullptr.
LossBreakdown eval_collocation(const ParameterVector& params,
                               const NetworkSpec& spec,
                               const HelmholtzProblem& problem,
                               const SampleSet& samples,
                               const LossWeights& weights,
                               Eigen::VectorXd* grad) {
  problem.validate();
  weights.validate();
  const int d = spec.input_dim;
  if (problem.domain.dim != d)
    throw std::invalid_argument("network and problem dimensions differ");
  const Eigen::Index n_int = samples.interior.rows();
  const Eigen::Index n_bnd = samples.boundary_total();
  if (n_int == 0 || n_bnd == 0)
    throw std::invalid_argument("loss needs nonempty interior and boundary sets");

  const double k02 = problem.medium.k0() * problem.medium.k0();
  const double eta = problem.medium.eta;
  const bool per_face = problem.bc_grouping == BcGrouping::PerFaceSets;
  const auto n_faces = static_cast<double>(samples.boundary.size());

  if (grad) {
    grad->resize(params.size());
    grad->setZero();
  }
  PropagationWorkspace ws;
  Eigen::MatrixXd adj;

  double sse_pde_r = 0.0, sse_pde_i = 0.0;
  {
    const int C = channel_count(DerivLevel::Hessian, d);
    for (Eigen::Index begin = 0; begin < n_int; begin += kChunk) {
      const Eigen::Index m = std::min(kChunk, n_int - begin);
      const auto& out =
          forward_chunk(params, spec, samples.interior.middleRows(begin, m),
                        DerivLevel::Hessian, grad != nullptr, ws);
      if (grad) adj.setZero(2, C * m);
      for (Eigen::Index p = 0; p < m; ++p) {
        const Eigen::Index base = p * C;
        double lap_r = 0.0, lap_i = 0.0;
        for (int a = 0; a < d; ++a) {
          lap_r += out(0, base + 1 + d + a * d + a);
          lap_i += out(1, base + 1 + d + a * d + a);
        }
        const Point x = samples.interior.row(begin + p).transpose();
        const Eigen::Vector2d g = eval_forcing(problem.source, x);
        const double r_r = lap_r / k02 - eta * lap_i / k02 + out(0, base) +
                           g[0] - eta * g[1];
        const double r_i = lap_i / k02 + eta * lap_r / k02 + out(1, base) +
                           eta * g[0] + g[1];
        sse_pde_r += r_r * r_r;
        sse_pde_i += r_i * r_i;
        if (grad) {
          const double c_r = 2.0 * weights.w_pde_r * r_r / n_int;
          const double c_i = 2.0 * weights.w_pde_i * r_i / n_int;
          adj(0, base) = c_r;
          adj(1, base) = c_i;
          const double h_r = (c_r + c_i * eta) / k02;
          const double h_i = (-c_r * eta + c_i) / k02;
          for (int a = 0; a < d; ++a) {
            adj(0, base + 1 + d + a * d + a) = h_r;
            adj(1, base + 1 + d + a * d + a) = h_i;
          }
        }
      }
      if (grad) backward_chunk(params, spec, adj, ws, *grad);
    }
  }

  LossBreakdown b;
  if (per_face) b.per_set.resize(samples.boundary.size());
  double bc_r_acc = 0.0, bc_i_acc = 0.0;
  {
    const int C = channel_count(DerivLevel::Gradient, d);
    for (std::size_t fi = 0; fi < samples.boundary.size(); ++fi) {
      const FaceSamples& face = samples.boundary[fi];
      const Eigen::Index n_f = face.points.rows();
      if (n_f == 0)
        throw std::invalid_argument("loss needs nonempty boundary faces");
      const double sign = face.normal[face.axis];
      // Per-point weight inside the mean: one global mean for SingleSet,
      // mean of per-face means for PerFaceSets.
      const double wt = per_face ? 1.0 / (n_faces * static_cast<double>(n_f))
                                 : 1.0 / static_cast<double>(n_bnd);
      double sse_r = 0.0, sse_i = 0.0;
      for (Eigen::Index begin = 0; begin < n_f; begin += kChunk) {
        const Eigen::Index m = std::min(kChunk, n_f - begin);
        const auto& out =
            forward_chunk(params, spec, face.points.middleRows(begin, m),
                          DerivLevel::Gradient, grad != nullptr, ws);
        if (grad) adj.setZero(2, C * m);
        for (Eigen::Index p = 0; p < m; ++p) {
          const Eigen::Index base = p * C;
          const double r_r = sign * out(0, base + 1 + face.axis);
          const double r_i = sign * out(1, base + 1 + face.axis);
          sse_r += r_r * r_r;
          sse_i += r_i * r_i;
          if (grad) {
            adj(0, base + 1 + face.axis) =
                2.0 * weights.w_bc_r * r_r * sign * wt;
            adj(1, base + 1 + face.axis) =
                2.0 * weights.w_bc_i * r_i * sign * wt;
          }
        }
        if (grad) backward_chunk(params, spec, adj, ws, *grad);
      }
      if (per_face) {
        b.per_set[fi] = {sse_r / n_f, sse_i / n_f};
        bc_r_acc += sse_r / n_f / n_faces;
        bc_i_acc += sse_i / n_f / n_faces;
      } else {
        bc_r_acc += sse_r / n_bnd;
        bc_i_acc += sse_i / n_bnd;
      }
    }
  }

  b.pde_r = sse_pde_r / n_int;
  b.pde_i = sse_pde_i / n_int;
  b.bc_r = bc_r_acc;
  b.bc_i = bc_i_acc;
  b.total = weights.w_pde_r * b.pde_r + weights.w_pde_i * b.pde_i +
            weights.w_bc_r * b.bc_r + weights.w_bc_i * b.bc_i;

  if (grad)
    for (Eigen::Index i = 0; i < grad->size(); ++i)
      if (!params.trainable[static_cast<std::size_t>(i)]) (*grad)[i] = 0.0;
  return b;
}

} // namespace

LossBreakdown total_loss(const ParameterVector& params,
                         const NetworkSpec& spec,
                         const HelmholtzProblem& problem,
                         const SampleSet& samples,
                         const LossWeights& weights) {
  return eval_collocation(params, spec, problem, samples, weights, nullptr);
}

LossBreakdown loss_gradient(const ParameterVector& params,
                            const NetworkSpec& spec,
                            const HelmholtzProblem& problem,
                            const SampleSet& samples,
                            const LossWeights& weights,
                            Eigen::VectorXd& grad) {
  return eval_collocation(params, spec, problem, samples, weights, &grad);
}

namespace {

double eval_mse(const ParameterVector& params, const NetworkSpec& spec,
                const Eigen::Ref<const Eigen::MatrixXd>& pts,
                const Eigen::Ref<const Eigen::MatrixX2d>& targets,
                Eigen::VectorXd* grad) {
  const Eigen::Index n = pts.rows();
  if (n == 0) throw std::invalid_argument("mse over an empty point set");
  if (targets.rows() != n)
    throw std::invalid_argument("mse targets do not match points");
  if (grad) {
    grad->resize(params.size());
    grad->setZero();
  }
  PropagationWorkspace ws;
  Eigen::MatrixXd adj;
  double sse = 0.0;
  for (Eigen::Index begin = 0; begin < n; begin += kChunk) {
    const Eigen::Index m = std::min(kChunk, n - begin);
    const auto& out = forward_chunk(params, spec, pts.middleRows(begin, m),
                                    DerivLevel::Value, grad != nullptr, ws);
    if (grad) adj.resize(2, m);
    for (Eigen::Index p = 0; p < m; ++p) {
      const double e_r = out(0, p) - targets(begin + p, 0);
      const double e_i = out(1, p) - targets(begin + p, 1);
      sse += e_r * e_r + e_i * e_i;
      if (grad) {
        adj(0, p) = 2.0 * e_r / n;
        adj(1, p) = 2.0 * e_i / n;
      }
    }
    if (grad) backward_chunk(params, spec, adj, ws, *grad);
  }
  if (grad)
    for (Eigen::Index i = 0; i < grad->size(); ++i)
      if (!params.trainable[static_cast<std::size_t>(i)]) (*grad)[i] = 0.0;
  return sse / n;
}

} // namespace

double mse_loss(const ParameterVector& params, const NetworkSpec& spec,
                const Eigen::Ref<const Eigen::MatrixXd>& pts,
                const Eigen::Ref<const Eigen::MatrixX2d>& targets) {
  return eval_mse(params, spec, pts, targets, nullptr);
}

double mse_gradient(const ParameterVector& params, const NetworkSpec& spec,
                    const Eigen::Ref<const Eigen::MatrixXd>& pts,
                    const Eigen::Ref<const Eigen::MatrixX2d>& targets,
                    Eigen::VectorXd& grad) {
  return eval_mse(params, spec, pts, targets, &grad);
}

} // namespace helmpinn
