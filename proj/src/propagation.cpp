#include "helmpinn/propagation.hpp"

#include <stdexcept>

namespace helmpinn {

namespace {

using StridedMap = Eigen::Map<Eigen::MatrixXd, 0, Eigen::OuterStride<>>;
using StridedConstMap =
    Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>>;

// View of one channel family across all points of a chunk: an
// (rows x m) matrix whose p-th column is column p*C + fam of M.
// Inner (row) access stays contiguous, so array expressions on the
// view vectorize.
StridedMap family(Eigen::MatrixXd& M, int fam, int C, Eigen::Index m) {
  const Eigen::Index r = M.rows();
  return {M.data() + fam * r, r, m, Eigen::OuterStride<>(r * C)};
}

StridedConstMap family(const Eigen::MatrixXd& M, int fam, int C,
                       Eigen::Index m) {
  const Eigen::Index r = M.rows();
  return {M.data() + fam * r, r, m, Eigen::OuterStride<>(r * C)};
}

int hess_fam(int dim, int a, int b) { return 1 + dim + a * dim + b; }

// sigma', sigma'', sigma''' on the value-channel preactivations, written
// as whole-chunk arrays; s0 goes straight into the state value family.
void evaluate_activation(const ActivationSpec& act, const Eigen::MatrixXd& Z,
                         Eigen::MatrixXd& S, LayerTape& t, int C,
                         Eigen::Index m, bool need_s2, bool need_s3) {
  const auto z = family(Z, 0, C, m).array();
  auto s0 = family(S, 0, C, m);
  t.s1.resize(Z.rows(), m);
  if (need_s2) t.s2.resize(Z.rows(), m);
  if (need_s3) t.s3.resize(Z.rows(), m);
  switch (act.kind) {
    case ActivationKind::SinScaled: {
      const double a = act.scale;
      const Eigen::ArrayXXd sin_az = (a * z).sin();
      const Eigen::ArrayXXd cos_az = (a * z).cos();
      s0 = sin_az;
      t.s1 = a * cos_az;
      if (need_s2) t.s2 = (-a * a) * sin_az;
      if (need_s3) t.s3 = (-a * a * a) * cos_az;
      break;
    }
    case ActivationKind::Tanh: {
      const Eigen::ArrayXXd th = z.tanh();
      const Eigen::ArrayXXd u = 1.0 - th.square();
      s0 = th;
      t.s1 = u;
      if (need_s2) t.s2 = -2.0 * th * u;
      if (need_s3) t.s3 = u * (6.0 * th.square() - 2.0);
      break;
    }
    case ActivationKind::Linear:
      throw std::logic_error("linear layers bypass evaluate_activation");
  }
}

} // namespace

const Eigen::MatrixXd& forward_chunk(
    const ParameterVector& params, const NetworkSpec& spec,
    const Eigen::Ref<const Eigen::MatrixXd>& pts, DerivLevel level,
    bool keep_for_reverse, PropagationWorkspace& ws) {
  const int d = spec.input_dim;
  const Eigen::Index m = pts.rows();
  if (pts.cols() != d)
    throw std::invalid_argument("forward_chunk: points have wrong dimension");
  const int C = channel_count(level, d);
  const int L = spec.layer_count();
  ws.points = static_cast<int>(m);
  ws.level = level;
  ws.tape.resize(static_cast<std::size_t>(L));

  // Input channels: value = x, gradient = identity, Hessian = 0.
  ws.input_state.setZero(d, C * m);
  family(ws.input_state, 0, C, m) = pts.transpose();
  if (level != DerivLevel::Value)
    for (int j = 0; j < d; ++j)
      family(ws.input_state, 1 + j, C, m).row(j).setOnes();

  const Eigen::MatrixXd* prev = &ws.input_state;
  for (int l = 0; l < L; ++l) {
    LayerTape& t = ws.tape[static_cast<std::size_t>(l)];
    const int out = spec.layer_out(l);
    const ActivationSpec& act = spec.layer_activation(l);

    t.preact.resize(out, C * m);
    t.preact.noalias() = params.weight(l) * (*prev);
    family(t.preact, 0, C, m).colwise() += params.bias(l);

    if (act.kind == ActivationKind::Linear) {
      t.state = t.preact;
    } else {
      t.state.resize(out, C * m);
      // The reverse pass consumes sigma'' on gradient channels and
      // sigma''' on Hessian channels, so keep them when it will run.
      const bool need_s2 =
          level == DerivLevel::Hessian ||
          (keep_for_reverse && level != DerivLevel::Value);
      const bool need_s3 =
          keep_for_reverse && level == DerivLevel::Hessian;
      evaluate_activation(act, t.preact, t.state, t, C, m, need_s2, need_s3);
      if (level != DerivLevel::Value)
        for (int j = 0; j < d; ++j)
          family(t.state, 1 + j, C, m).array() =
              t.s1 * family(t.preact, 1 + j, C, m).array();
      if (level == DerivLevel::Hessian)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const int f = hess_fam(d, a, b);
            family(t.state, f, C, m).array() =
                t.s2 * family(t.preact, 1 + a, C, m).array() *
                    family(t.preact, 1 + b, C, m).array() +
                t.s1 * family(t.preact, f, C, m).array();
          }
    }
    prev = &t.state;
  }
  return ws.tape.back().state;
}

void backward_chunk(const ParameterVector& params, const NetworkSpec& spec,
                    const Eigen::Ref<const Eigen::MatrixXd>& output_adjoint,
                    PropagationWorkspace& ws, Eigen::VectorXd& grad) {
  const int d = spec.input_dim;
  const Eigen::Index m = ws.points;
  const int C = channel_count(ws.level, d);
  const int L = spec.layer_count();
  if (output_adjoint.rows() != spec.output_dim ||
      output_adjoint.cols() != C * m)
    throw std::invalid_argument("backward_chunk: adjoint has wrong shape");
  if (grad.size() != params.size())
    throw std::invalid_argument("backward_chunk: gradient has wrong size");

  ws.state_adj = output_adjoint;
  for (int l = L - 1; l >= 0; --l) {
    const LayerTape& t = ws.tape[static_cast<std::size_t>(l)];
    const ActivationSpec& act = spec.layer_activation(l);
    const int out = spec.layer_out(l);

    if (act.kind == ActivationKind::Linear) {
      ws.preact_adj = ws.state_adj;
    } else {
      ws.preact_adj.resize(out, C * m);
      // Value channel collects every path through sigma', sigma'', sigma'''.
      auto zbar = family(ws.preact_adj, 0, C, m);
      zbar.array() = family(ws.state_adj, 0, C, m).array() * t.s1;
      if (ws.level != DerivLevel::Value)
        for (int j = 0; j < d; ++j)
          zbar.array() += family(ws.state_adj, 1 + j, C, m).array() * t.s2 *
                          family(t.preact, 1 + j, C, m).array();
      if (ws.level == DerivLevel::Hessian)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const int f = hess_fam(d, a, b);
            zbar.array() +=
                family(ws.state_adj, f, C, m).array() *
                (t.s3 * family(t.preact, 1 + a, C, m).array() *
                     family(t.preact, 1 + b, C, m).array() +
                 t.s2 * family(t.preact, f, C, m).array());
          }
      if (ws.level != DerivLevel::Value)
        for (int j = 0; j < d; ++j) {
          auto gbar = family(ws.preact_adj, 1 + j, C, m);
          gbar.array() = family(ws.state_adj, 1 + j, C, m).array() * t.s1;
          if (ws.level == DerivLevel::Hessian)
            for (int b = 0; b < d; ++b) {
              gbar.array() += (family(ws.state_adj, hess_fam(d, j, b), C, m)
                                   .array() +
                               family(ws.state_adj, hess_fam(d, b, j), C, m)
                                   .array()) *
                              t.s2 *
                              family(t.preact, 1 + b, C, m).array();
            }
        }
      if (ws.level == DerivLevel::Hessian)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const int f = hess_fam(d, a, b);
            family(ws.preact_adj, f, C, m).array() =
                family(ws.state_adj, f, C, m).array() * t.s1;
          }
    }

    const Eigen::MatrixXd& below =
        l == 0 ? ws.input_state
               : ws.tape[static_cast<std::size_t>(l - 1)].state;
    const auto& e = params.layout.layers[static_cast<std::size_t>(l)];
    Eigen::Map<Eigen::MatrixXd> wgrad(grad.data() + e.weight_offset, e.out,
                                      e.in);
    Eigen::Map<Eigen::VectorXd> bgrad(grad.data() + e.bias_offset, e.out);
    wgrad.noalias() += ws.preact_adj * below.transpose();
    bgrad += family(ws.preact_adj, 0, C, m).rowwise().sum();

    if (l > 0) ws.state_adj = params.weight(l).transpose() * ws.preact_adj;
  }
}

} // namespace helmpinn
