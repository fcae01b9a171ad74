#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "helmpinn/physics.hpp"

namespace helmpinn {

/// A complex pressure field sampled on explicit points.
struct FieldOnPoints {
  Eigen::MatrixXd points;  // n x dim
  Eigen::VectorXd p_r;
  Eigen::VectorXd p_i;

  Eigen::Index size() const { return p_r.size(); }
  void validate() const;
};

void write_field_csv(const FieldOnPoints& field, const std::string& path);

/// Closed-form solution for the infinitely wide cosine source:
/// p = amplitude * prod_j cos(k0 x_j) with
/// amplitude = 2 (1 + i eta) / ((d-1) + i d eta).
struct AnalyticInfty {
  int dim = 3;
  double k0 = 0.0;
  std::complex<double> amplitude;

  std::complex<double> eval(const Point& x) const;
  EvalWithDerivatives eval_with_derivatives(const Point& x) const;
  FieldOnPoints eval_field(const Eigen::Ref<const Eigen::MatrixXd>& pts) const;
};

/// Requires sharpness = infinity, cosine_wavenumber = k0, and k0 l_j / pi,
/// k0 L_j / pi integral on every axis (Neumann-compatible cosines);
/// violations raise an input error naming the failing axis.
AnalyticInfty analytic_infty(const HelmholtzProblem& problem);

/// Solution expanded in Neumann eigenfunctions
/// phi_m(x) = prod_j cos(m_j pi (x_j - lower_j)/L_j):
/// p_hat_m = k0^2 g_hat_m / (lambda_m - k_c^2), lambda_m = sum (m_j pi/L_j)^2.
/// The field solves the PDE exactly for the *projected* source, which
/// projected_forcing exposes for residual checks.
struct ModalSolution {
  HelmholtzProblem problem;
  std::vector<int> max_modes;  // inclusive top index per axis
  std::vector<std::complex<double>> coefficients;  // row-major over axes
  double tail_fraction = 0.0;

  std::complex<double> eval(const Point& x) const;
  Eigen::Vector2d projected_forcing(const Point& x) const;
  EvalWithDerivatives eval_with_derivatives(const Point& x) const;
  FieldOnPoints eval_field(const Eigen::Ref<const Eigen::MatrixXd>& pts) const;
  /// Tensor-grid evaluation via per-axis contraction; points are ordered
  /// with the last axis fastest.
  FieldOnPoints eval_grid(const std::vector<Eigen::VectorXd>& axes) const;
};

/// Mode counts sized by the cosine wavenumber and the pi*s source scale.
std::vector<int> default_mode_counts(const HelmholtzProblem& problem);

/// Projects the source by per-axis midpoint quadrature (the source is a
/// product of per-axis factors). Throws on an undamped resonance
/// (eta == 0 and lambda_m == k0^2) and when the last mode shell carries
/// more than 1e-8 of the coefficient energy.
ModalSolution modal_solve(const HelmholtzProblem& problem,
                          const std::vector<int>& max_modes);

void save_modal(const ModalSolution& modal, const std::string& path);
ModalSolution load_modal(const std::string& path,
                         const HelmholtzProblem& problem);

/// Free-field Green's function exp(i k r)/(4 pi r), 3D; throws at r = 0.
std::complex<double> greens_function(std::complex<double> k, const Point& x,
                                     const Point& x0);

/// Grid sized so the excluded near-singular neighbourhood (error
/// O(k0^2 h^2)) and the source window are both resolved.
std::vector<int> default_gf_grid(const HelmholtzProblem& problem);

/// Riemann sum of G(x, x_c) g(x_c) dV over uniform cell centers, skipping
/// the cell that contains the query point (self-cell exclusion). 3D only.
FieldOnPoints gf_convolve(const HelmholtzProblem& problem,
                          const std::vector<int>& grid_n,
                          const Eigen::Ref<const Eigen::MatrixXd>& query);

/// Uniform endpoint-inclusive per-axis coordinates for error evaluation.
std::vector<Eigen::VectorXd> make_eval_axes(const BoxDomain& domain,
                                            int per_axis);
/// Tensor points of the axes, last axis fastest (matches eval_grid).
Eigen::MatrixXd tensor_points(const std::vector<Eigen::VectorXd>& axes);

} // namespace helmpinn
