#include "helmpinn/physics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace helmpinn {

void BoxDomain::validate() const {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("domain dim must be 2 or 3");
  if (lower.size() != dim || upper.size() != dim)
    throw std::invalid_argument("domain bounds must have dim coordinates");
  for (int i = 0; i < dim; ++i)
    if (!(upper[i] > lower[i]))
      throw std::invalid_argument("domain upper must exceed lower on axis " +
                                  std::to_string(i));
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= length(i);
  return v;
}

bool BoxDomain::contains(const Point& x, double pad) const {
  if (x.size() != dim) return false;
  for (int i = 0; i < dim; ++i)
    if (x[i] < lower[i] - pad || x[i] > upper[i] + pad) return false;
  return true;
}

BoxDomain BoxDomain::unit(int dim) {
  BoxDomain d;
  d.dim = dim;
  d.lower = Point::Zero(dim);
  d.upper = Point::Ones(dim);
  return d;
}

void MediumSpec::validate() const {
  if (!(c0 > 0.0)) throw std::invalid_argument("medium c0 must be > 0");
  if (!(nu > 0.0)) throw std::invalid_argument("medium nu must be > 0");
  if (!(L_ref > 0.0)) throw std::invalid_argument("medium L_ref must be > 0");
  if (!(std::abs(eta) < 1.0))
    throw std::invalid_argument("medium |eta| must be < 1");
}

void SourceSpec::validate(const BoxDomain& domain) const {
  if (!(sharpness > 0.0))
    throw std::invalid_argument("source sharpness must be > 0 or infinity");
  if (location.size() != domain.dim)
    throw std::invalid_argument("source location has wrong dimension");
  if (!domain.contains(location, 1e-12))
    throw std::invalid_argument("source location outside the domain closure");
  if (!std::isfinite(cosine_wavenumber))
    throw std::invalid_argument("source cosine_wavenumber must be finite");
}

void HelmholtzProblem::validate() const {
  domain.validate();
  medium.validate();
  source.validate(domain);
}

void LossWeights::validate() const {
  const double ws[] = {w_bc_r, w_bc_i, w_pde_r, w_pde_i};
  double sum = 0.0;
  for (double w : ws) {
    if (!(w >= 0.0)) throw std::invalid_argument("loss weights must be >= 0");
    sum += w;
  }
  if (!(sum > 0.0))
    throw std::invalid_argument("at least one loss weight must be > 0");
}

Eigen::Vector2d eval_forcing(const SourceSpec& source, const Point& x) {
  double g = 2.0;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    g *= std::cos(source.cosine_wavenumber * x[j]);
  if (!source.is_infinitely_wide()) {
    const double r2 = (x - source.location).squaredNorm();
    g *= std::exp(-r2 / (2.0 * source.sharpness * source.sharpness));
  }
  return {g, 0.0};
}

Eigen::Vector2d pde_residual(const EvalWithDerivatives& eval,
                             const MediumSpec& medium,
                             const Eigen::Vector2d& g) {
  const double k02 = medium.k0() * medium.k0();
  const double eta = medium.eta;
  const double lap_r = eval.input_laplacian[0];
  const double lap_i = eval.input_laplacian[1];
  const double r_r =
      lap_r / k02 - eta * lap_i / k02 + eval.value[0] + g[0] - eta * g[1];
  const double r_i =
      lap_i / k02 + eta * lap_r / k02 + eval.value[1] + eta * g[0] + g[1];
  return {r_r, r_i};
}

Eigen::Vector2d bc_residual(const EvalWithDerivatives& eval,
                            const Point& normal) {
  if (eval.input_gradient.cols() != normal.size())
    throw std::invalid_argument("bc_residual: normal has wrong dimension");
  if (std::abs(normal.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("bc_residual: normal must be a unit vector");
  return eval.input_gradient * normal;
}

} // namespace helmpinn
