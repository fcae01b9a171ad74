#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "helmpinn/network.hpp"

namespace helmpinn {

/// Axis-aligned rectangular room [lower, upper] in 2 or 3 dimensions.
struct BoxDomain {
  Point lower;
  Point upper;
  int dim = 3;

  void validate() const;

  double length(int axis) const { return upper[axis] - lower[axis]; }
  double volume() const;
  Point center() const { return 0.5 * (lower + upper); }
  bool contains(const Point& x, double pad = 0.0) const;

  static BoxDomain unit(int dim);
};

/// Acoustic medium with complex squared sound speed c^2 = c0^2 (1 + i eta).
/// The dimensionless frequency nu = f L_ref / c0 fixes everything else.
struct MediumSpec {
  double c0 = 1.0;
  double eta = 0.0;
  double nu = 0.0;
  double L_ref = 1.0;

  void validate() const;

  double f() const { return nu * c0 / L_ref; }
  double omega() const { return 2.0 * M_PI * f(); }
  double k0() const { return omega() / c0; }
  double wavelength() const { return c0 / f(); }
  /// 1/k_i^2 expressed through eta: eta / k0^2 (sign included).
  double inv_ki2() const { return eta / (k0() * k0()); }
  /// Complex squared wavenumber k_c^2 = k0^2 / (1 + i eta).
  std::complex<double> kc2() const {
    const double k02 = k0() * k0();
    return k02 / std::complex<double>(1.0, eta);
  }
};

/// Forcing of Eq. g_r = 2 prod_j cos(k x_j) exp(-|x-x_s|^2/(2 s^2)), g_i = 0.
/// sharpness = +infinity selects the pure cosine source.
struct SourceSpec {
  double sharpness = std::numeric_limits<double>::infinity();
  Point location;
  double cosine_wavenumber = 0.0;

  void validate(const BoxDomain& domain) const;
  bool is_infinitely_wide() const { return std::isinf(sharpness); }
};

/// Whether all walls form one Neumann loss set or each face its own.
enum class BcGrouping { SingleSet, PerFaceSets };

struct HelmholtzProblem {
  BoxDomain domain;
  MediumSpec medium;
  SourceSpec source;
  BcGrouping bc_grouping = BcGrouping::SingleSet;

  void validate() const;
};

/// Weights of the four loss terms: total = w_pde_r L_pde_r + w_pde_i L_pde_i
///                                        + w_bc_r L_bc_r + w_bc_i L_bc_i.
struct LossWeights {
  double w_bc_r = 1.0;
  double w_bc_i = 1.0;
  double w_pde_r = 1.0;
  double w_pde_i = 1.0;

  void validate() const;
};

/// Mean-squared residuals per term plus the weighted total. per_set holds
/// per-face (bc_r, bc_i) means and is filled only under PerFaceSets.
struct LossBreakdown {
  double pde_r = 0.0;
  double pde_i = 0.0;
  double bc_r = 0.0;
  double bc_i = 0.0;
  double total = 0.0;
  std::vector<std::array<double, 2>> per_set;
};

/// Source term (g_r, g_i) at x. The exponential factor is exactly 1 for
/// an infinitely wide source.
Eigen::Vector2d eval_forcing(const SourceSpec& source, const Point& x);

/// Split Helmholtz residuals
///   r_r = Lap p_r/k0^2 - eta Lap p_i/k0^2 + p_r + g_r - eta g_i
///   r_i = Lap p_i/k0^2 + eta Lap p_r/k0^2 + p_i + eta g_r + g_i.
Eigen::Vector2d pde_residual(const EvalWithDerivatives& eval,
                             const MediumSpec& medium,
                             const Eigen::Vector2d& g);

/// Neumann residuals (grad p_r . n, grad p_i . n); normal must be unit.
Eigen::Vector2d bc_residual(const EvalWithDerivatives& eval,
                            const Point& normal);

} // namespace helmpinn
