#include "helmpinn/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace helmpinn {

using cd = std::complex<double>;

void FieldOnPoints::validate() const {
  if (points.rows() != p_r.size() || points.rows() != p_i.size())
    throw std::invalid_argument("field arrays have mismatched lengths");
  if (!p_r.allFinite() || !p_i.allFinite())
    throw std::invalid_argument("field contains non-finite values");
}

void write_field_csv(const FieldOnPoints& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  const int d = static_cast<int>(field.points.cols());
  out << (d == 2 ? "x,y,p_r,p_i\n" : "x,y,z,p_r,p_i\n");
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
    out << buf;
  };
  for (Eigen::Index p = 0; p < field.size(); ++p) {
    for (int j = 0; j < d; ++j) put(field.points(p, j), ',');
    put(field.p_r[p], ',');
    put(field.p_i[p], '\n');
  }
}

// ---------------------------------------------------------------------------
// Closed-form infinitely-wide-source solution
// ---------------------------------------------------------------------------

cd AnalyticInfty::eval(const Point& x) const {
  double p0 = 1.0;
  for (int j = 0; j < dim; ++j) p0 *= std::cos(k0 * x[j]);
  return amplitude * p0;
}

EvalWithDerivatives AnalyticInfty::eval_with_derivatives(const Point& x) const {
  Eigen::ArrayXd c(dim), s(dim);
  for (int j = 0; j < dim; ++j) {
    c[j] = std::cos(k0 * x[j]);
    s[j] = std::sin(k0 * x[j]);
  }
  const double p0 = c.prod();
  EvalWithDerivatives ev;
  ev.input_gradient.resize(2, dim);
  for (int a = 0; a < dim; ++a) {
    double others = 1.0;
    for (int j = 0; j < dim; ++j)
      if (j != a) others *= c[j];
    const cd ga = amplitude * (-k0 * s[a] * others);
    ev.input_gradient(0, a) = ga.real();
    ev.input_gradient(1, a) = ga.imag();
  }
  const cd val = amplitude * p0;
  const cd lap = -static_cast<double>(dim) * k0 * k0 * val;
  ev.value = {val.real(), val.imag()};
  ev.input_laplacian = {lap.real(), lap.imag()};
  return ev;
}

FieldOnPoints AnalyticInfty::eval_field(
    const Eigen::Ref<const Eigen::MatrixXd>& pts) const {
  FieldOnPoints f;
  f.points = pts;
  f.p_r.resize(pts.rows());
  f.p_i.resize(pts.rows());
  for (Eigen::Index p = 0; p < pts.rows(); ++p) {
    const cd v = eval(pts.row(p).transpose());
    f.p_r[p] = v.real();
    f.p_i[p] = v.imag();
  }
  return f;
}

AnalyticInfty analytic_infty(const HelmholtzProblem& problem) {
  problem.validate();
  if (!problem.source.is_infinitely_wide())
    throw std::invalid_argument(
        "analytic solution requires an infinitely wide source");
  const double k0 = problem.medium.k0();
  if (std::abs(problem.source.cosine_wavenumber - k0) >
      1e-12 * std::max(1.0, k0))
    throw std::invalid_argument(
        "analytic solution requires cosine_wavenumber == k0");
  for (int j = 0; j < problem.domain.dim; ++j) {
    for (double v : {problem.domain.lower[j], problem.domain.length(j)}) {
      const double t = k0 * v / M_PI;
      if (std::abs(t - std::round(t)) > 1e-9)
        throw std::invalid_argument(
            "axis " + std::to_string(j) + ": k0*" +
            (v == problem.domain.lower[j] ? std::string("lower")
                                          : std::string("length")) +
            "/pi = " + std::to_string(t) + " is not an integer");
    }
  }
  AnalyticInfty a;
  a.dim = problem.domain.dim;
  a.k0 = k0;
  const double eta = problem.medium.eta;
  a.amplitude = 2.0 * cd(1.0, eta) / cd(a.dim - 1.0, a.dim * eta);
  return a;
}

// ---------------------------------------------------------------------------
// Modal (tensor-cosine) spectral solution
// ---------------------------------------------------------------------------

namespace {

// cos(m theta) and the eigenfunction slope factor -(m pi/L) sin(m theta)
// for m = 0..M, by the Chebyshev-style double-angle recurrences.
void mode_tables(double theta, double L, int M, Eigen::VectorXd& cos_t,
                 Eigen::VectorXd* dslope) {
  cos_t.resize(M + 1);
  if (dslope) dslope->resize(M + 1);
  const double c1 = std::cos(theta);
  const double s1 = std::sin(theta);
  double c_prev = 1.0, c_cur = c1;
  double s_prev = 0.0, s_cur = s1;
  cos_t[0] = 1.0;
  if (dslope) (*dslope)[0] = 0.0;
  for (int m = 1; m <= M; ++m) {
    cos_t[m] = c_cur;
    if (dslope) (*dslope)[m] = -(m * M_PI / L) * s_cur;
    const double c_next = 2.0 * c1 * c_cur - c_prev;
    const double s_next = 2.0 * c1 * s_cur - s_prev;
    c_prev = c_cur;
    c_cur = c_next;
    s_prev = s_cur;
    s_cur = s_next;
  }
}

// Walks all multi-indices m in row-major order, passing lambda_m along.
template <typename Fn>
void for_each_mode(const BoxDomain& box, const std::vector<int>& M, Fn&& fn) {
  const int d = box.dim;
  std::vector<double> ax_lambda(static_cast<std::size_t>(d));
  int m[3] = {0, 0, 0};
  std::size_t idx = 0;
  // Nested loops hand-rolled over up to three axes.
  for (m[0] = 0; m[0] <= M[0]; ++m[0]) {
    const double l0 = std::pow(m[0] * M_PI / box.length(0), 2);
    for (m[1] = 0; m[1] <= M[1]; ++m[1]) {
      const double l1 = l0 + std::pow(m[1] * M_PI / box.length(1), 2);
      if (d == 2) {
        fn(m, l1, idx++);
      } else {
        for (m[2] = 0; m[2] <= M[2]; ++m[2])
          fn(m, l1 + std::pow(m[2] * M_PI / box.length(2), 2), idx++);
      }
    }
  }
}

} // namespace

std::vector<int> default_mode_counts(const HelmholtzProblem& problem) {
  std::vector<int> M;
  const double kappa = problem.source.cosine_wavenumber;
  for (int j = 0; j < problem.domain.dim; ++j) {
    const double L = problem.domain.length(j);
    double m = std::ceil(std::abs(kappa) * L / M_PI) + 8.0;
    if (!problem.source.is_infinitely_wide()) {
      // A finite window has nonzero slope at the walls, so coefficients
      // fall off only like 1/m^2 past the bandwidth; the wider margin
      // keeps the last-shell energy under the 1e-8 gate.
      m += std::ceil(6.0 * L / (M_PI * problem.source.sharpness)) + 24.0;
    }
    M.push_back(static_cast<int>(std::min(m, 512.0)));
  }
  return M;
}

ModalSolution modal_solve(const HelmholtzProblem& problem,
                          const std::vector<int>& max_modes) {
  problem.validate();
  const int d = problem.domain.dim;
  if (static_cast<int>(max_modes.size()) != d)
    throw std::invalid_argument("need one mode count per axis");
  for (int Mj : max_modes)
    if (Mj < 1) throw std::invalid_argument("mode counts must be >= 1");

  const BoxDomain& box = problem.domain;
  const SourceSpec& src = problem.source;
  const double k02 = problem.medium.k0() * problem.medium.k0();
  const cd kc2 = problem.medium.kc2();

  // Per-axis projections of the separable source onto cos(m pi (x-l)/L),
  // already normalized by the eigenfunction norms (1/L for m=0, 2/L else).
  std::vector<Eigen::VectorXd> cn(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const int M = max_modes[static_cast<std::size_t>(j)];
    const double L = box.length(j);
    const double l = box.lower[j];
    const Eigen::Index nq = std::max<Eigen::Index>(16384, 16 * (M + 1));
    const double h = L / static_cast<double>(nq);

    Eigen::ArrayXd x(nq);
    for (Eigen::Index t = 0; t < nq; ++t)
      x[t] = l + (static_cast<double>(t) + 0.5) * h;
    Eigen::ArrayXd f = (src.cosine_wavenumber * x).cos();
    if (!src.is_infinitely_wide())
      f *= (-(x - src.location[j]).square() /
            (2.0 * src.sharpness * src.sharpness))
               .exp();
    if (j == 0) f *= 2.0;  // overall source amplitude

    const Eigen::ArrayXd theta = M_PI * (x - l) / L;
    const Eigen::ArrayXd c1 = theta.cos();
    Eigen::ArrayXd prev = Eigen::ArrayXd::Ones(nq);
    Eigen::ArrayXd cur = c1;
    Eigen::VectorXd& c = cn[static_cast<std::size_t>(j)];
    c.resize(M + 1);
    c[0] = h * f.sum() / L;
    for (int m = 1; m <= M; ++m) {
      c[m] = h * (f * cur).sum() * 2.0 / L;
      Eigen::ArrayXd next = 2.0 * c1 * cur - prev;
      prev.swap(cur);
      cur.swap(next);
    }
  }

  ModalSolution sol;
  sol.problem = problem;
  sol.max_modes = max_modes;
  std::size_t count = 1;
  for (int Mj : max_modes) count *= static_cast<std::size_t>(Mj + 1);
  sol.coefficients.resize(count);

  const bool undamped = problem.medium.eta == 0.0;
  double total_energy = 0.0, shell_energy = 0.0;
  for_each_mode(box, max_modes, [&](const int* m, double lambda,
                                    std::size_t idx) {
    double g_hat = 1.0;
    for (int j = 0; j < d; ++j) g_hat *= cn[static_cast<std::size_t>(j)][m[j]];
    if (undamped && std::abs(lambda - k02) <= 1e-9 * std::max(1.0, k02))
      throw std::runtime_error(
          "undamped resonance: eigenvalue of mode " + std::to_string(m[0]) +
          (d == 3 ? "," + std::to_string(m[1]) + "," + std::to_string(m[2])
                  : "," + std::to_string(m[1])) +
          " coincides with k0^2");
    const cd p_hat = k02 * g_hat / (lambda - kc2);
    sol.coefficients[idx] = p_hat;
    const double e = std::norm(p_hat);
    total_energy += e;
    bool on_shell = false;
    for (int j = 0; j < d; ++j)
      if (m[j] == max_modes[static_cast<std::size_t>(j)]) on_shell = true;
    if (on_shell) shell_energy += e;
  });

  sol.tail_fraction = total_energy > 0.0 ? shell_energy / total_energy : 0.0;
  if (sol.tail_fraction > 1e-8)
    throw std::runtime_error(
        "modal truncation too coarse: last-shell energy fraction " +
        std::to_string(sol.tail_fraction));
  return sol;
}

cd ModalSolution::eval(const Point& x) const {
  const int d = problem.domain.dim;
  Eigen::VectorXd ct[3];
  for (int j = 0; j < d; ++j)
    mode_tables(M_PI * (x[j] - problem.domain.lower[j]) /
                    problem.domain.length(j),
                problem.domain.length(j), max_modes[static_cast<std::size_t>(j)],
                ct[j], nullptr);
  cd acc = 0.0;
  for_each_mode(problem.domain, max_modes,
                [&](const int* m, double, std::size_t idx) {
                  double phi = 1.0;
                  for (int j = 0; j < d; ++j) phi *= ct[j][m[j]];
                  acc += coefficients[idx] * phi;
                });
  return acc;
}

Eigen::Vector2d ModalSolution::projected_forcing(const Point& x) const {
  const int d = problem.domain.dim;
  const double k02 = problem.medium.k0() * problem.medium.k0();
  const cd kc2 = problem.medium.kc2();
  Eigen::VectorXd ct[3];
  for (int j = 0; j < d; ++j)
    mode_tables(M_PI * (x[j] - problem.domain.lower[j]) /
                    problem.domain.length(j),
                problem.domain.length(j), max_modes[static_cast<std::size_t>(j)],
                ct[j], nullptr);
  cd acc = 0.0;
  for_each_mode(problem.domain, max_modes,
                [&](const int* m, double lambda, std::size_t idx) {
                  double phi = 1.0;
                  for (int j = 0; j < d; ++j) phi *= ct[j][m[j]];
                  acc += coefficients[idx] * ((lambda - kc2) / k02) * phi;
                });
  return {acc.real(), acc.imag()};
}

EvalWithDerivatives ModalSolution::eval_with_derivatives(const Point& x) const {
  const int d = problem.domain.dim;
  Eigen::VectorXd ct[3], dt[3];
  for (int j = 0; j < d; ++j)
    mode_tables(M_PI * (x[j] - problem.domain.lower[j]) /
                    problem.domain.length(j),
                problem.domain.length(j), max_modes[static_cast<std::size_t>(j)],
                ct[j], &dt[j]);
  cd val = 0.0, lap = 0.0;
  cd grad[3] = {0.0, 0.0, 0.0};
  for_each_mode(problem.domain, max_modes,
                [&](const int* m, double lambda, std::size_t idx) {
                  const cd c = coefficients[idx];
                  double phi = 1.0;
                  for (int j = 0; j < d; ++j) phi *= ct[j][m[j]];
                  val += c * phi;
                  lap += c * (-lambda) * phi;
                  for (int a = 0; a < d; ++a) {
                    double fac = dt[a][m[a]];
                    for (int j = 0; j < d; ++j)
                      if (j != a) fac *= ct[j][m[j]];
                    grad[a] += c * fac;
                  }
                });
  EvalWithDerivatives ev;
  ev.value = {val.real(), val.imag()};
  ev.input_gradient.resize(2, d);
  for (int a = 0; a < d; ++a) {
    ev.input_gradient(0, a) = grad[a].real();
    ev.input_gradient(1, a) = grad[a].imag();
  }
  ev.input_laplacian = {lap.real(), lap.imag()};
  return ev;
}

FieldOnPoints ModalSolution::eval_field(
    const Eigen::Ref<const Eigen::MatrixXd>& pts) const {
  FieldOnPoints f;
  f.points = pts;
  f.p_r.resize(pts.rows());
  f.p_i.resize(pts.rows());
  for (Eigen::Index p = 0; p < pts.rows(); ++p) {
    const cd v = eval(pts.row(p).transpose());
    f.p_r[p] = v.real();
    f.p_i[p] = v.imag();
  }
  return f;
}

FieldOnPoints ModalSolution::eval_grid(
    const std::vector<Eigen::VectorXd>& axes) const {
  const int d = problem.domain.dim;
  if (static_cast<int>(axes.size()) != d)
    throw std::invalid_argument("need one coordinate array per axis");
  // Cosine tables per axis: (M_j+1) x G_j, complex for the contraction.
  Eigen::MatrixXcd C[3];
  for (int j = 0; j < d; ++j) {
    const int M = max_modes[static_cast<std::size_t>(j)];
    const auto& ax = axes[static_cast<std::size_t>(j)];
    C[j].resize(M + 1, ax.size());
    Eigen::VectorXd col;
    for (Eigen::Index g = 0; g < ax.size(); ++g) {
      mode_tables(M_PI * (ax[g] - problem.domain.lower[j]) /
                      problem.domain.length(j),
                  problem.domain.length(j), M, col, nullptr);
      C[j].col(g) = col.cast<cd>();
    }
  }

  FieldOnPoints f;
  f.points = tensor_points(axes);
  f.p_r.resize(f.points.rows());
  f.p_i.resize(f.points.rows());

  const int M0 = max_modes[0], M1 = max_modes[1];
  using RowMat =
      Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (d == 2) {
    Eigen::Map<const RowMat> A(coefficients.data(), M0 + 1, M1 + 1);
    const Eigen::MatrixXcd P = C[0].transpose() * A * C[1];
    for (Eigen::Index g0 = 0; g0 < P.rows(); ++g0)
      for (Eigen::Index g1 = 0; g1 < P.cols(); ++g1) {
        const Eigen::Index idx = g0 * P.cols() + g1;
        f.p_r[idx] = P(g0, g1).real();
        f.p_i[idx] = P(g0, g1).imag();
      }
    return f;
  }

  const int M2 = max_modes[2];
  const Eigen::Index G1 = axes[1].size(), G2 = axes[2].size();
  Eigen::Map<const RowMat> A(coefficients.data(), M0 + 1,
                             static_cast<Eigen::Index>(M1 + 1) * (M2 + 1));
  const Eigen::MatrixXcd T1 = C[0].transpose() * A;  // G0 x (M1+1)(M2+1)
  for (Eigen::Index g0 = 0; g0 < T1.rows(); ++g0) {
    const Eigen::RowVectorXcd row = T1.row(g0);
    Eigen::Map<const RowMat> B(row.data(), M1 + 1, M2 + 1);
    const Eigen::MatrixXcd P = C[1].transpose() * (B * C[2]);  // G1 x G2
    for (Eigen::Index g1 = 0; g1 < G1; ++g1)
      for (Eigen::Index g2 = 0; g2 < G2; ++g2) {
        const Eigen::Index idx = (g0 * G1 + g1) * G2 + g2;
        f.p_r[idx] = P(g1, g2).real();
        f.p_i[idx] = P(g1, g2).imag();
      }
  }
  return f;
}

void save_modal(const ModalSolution& modal, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const char magic[4] = {'H', 'P', 'M', 'D'};
  out.write(magic, 4);
  const std::int32_t dim = modal.problem.domain.dim;
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  for (int Mj : modal.max_modes) {
    const std::int32_t m = Mj;
    out.write(reinterpret_cast<const char*>(&m), sizeof m);
  }
  const std::uint64_t count = modal.coefficients.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(modal.coefficients.data()),
            static_cast<std::streamsize>(count * sizeof(cd)));
  out.write(reinterpret_cast<const char*>(&modal.tail_fraction),
            sizeof modal.tail_fraction);
  if (!out) throw std::runtime_error("write failed: " + path);
}

ModalSolution load_modal(const std::string& path,
                         const HelmholtzProblem& problem) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "HPMD")
    throw std::runtime_error("not a modal solution file: " + path);
  std::int32_t dim = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (dim != problem.domain.dim)
    throw std::runtime_error("modal file dimension mismatch");
  ModalSolution sol;
  sol.problem = problem;
  for (int j = 0; j < dim; ++j) {
    std::int32_t m = 0;
    in.read(reinterpret_cast<char*>(&m), sizeof m);
    sol.max_modes.push_back(m);
  }
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  sol.coefficients.resize(count);
  in.read(reinterpret_cast<char*>(sol.coefficients.data()),
          static_cast<std::streamsize>(count * sizeof(cd)));
  in.read(reinterpret_cast<char*>(&sol.tail_fraction),
          sizeof sol.tail_fraction);
  if (!in) throw std::runtime_error("truncated modal solution file: " + path);
  return sol;
}

// ---------------------------------------------------------------------------
// Free-field Green's function convolution
// ---------------------------------------------------------------------------

cd greens_function(cd k, const Point& x, const Point& x0) {
  const double r = (x - x0).norm();
  if (r == 0.0)
    throw std::domain_error("Green's function singularity at r = 0");
  return std::exp(cd(0.0, 1.0) * k * r) / (4.0 * M_PI * r);
}

std::vector<int> default_gf_grid(const HelmholtzProblem& problem) {
  // The dominant quadrature error is the excluded near-singular
  // neighbourhood, O(k0^2 h^2); 5.75*k0*L cells per axis keeps the
  // grid-doubling drift under one percent at moderate wavenumbers.
  const double k0 = problem.medium.k0();
  std::vector<int> n;
  for (int j = 0; j < problem.domain.dim; ++j) {
    const double L = problem.domain.length(j);
    double c = std::ceil(5.75 * k0 * L);
    if (!problem.source.is_infinitely_wide())
      c = std::max(c, std::ceil(2.0 * L / problem.source.sharpness));
    n.push_back(static_cast<int>(std::clamp(c, 16.0, 96.0)));
  }
  return n;
}

FieldOnPoints gf_convolve(const HelmholtzProblem& problem,
                          const std::vector<int>& grid_n,
                          const Eigen::Ref<const Eigen::MatrixXd>& query) {
  problem.validate();
  if (problem.domain.dim != 3)
    throw std::invalid_argument("Green's-function convolution is 3D only");
  if (grid_n.size() != 3)
    throw std::invalid_argument("need one grid count per axis");
  for (int n : grid_n)
    if (n < 8) throw std::invalid_argument("GF grid needs >= 8 cells per axis");

  const BoxDomain& box = problem.domain;
  const int n0 = grid_n[0], n1 = grid_n[1], n2 = grid_n[2];
  double h[3], dv = 1.0;
  Eigen::VectorXd centers[3];
  for (int j = 0; j < 3; ++j) {
    h[j] = box.length(j) / grid_n[static_cast<std::size_t>(j)];
    dv *= h[j];
    centers[j].resize(grid_n[static_cast<std::size_t>(j)]);
    for (int i = 0; i < grid_n[static_cast<std::size_t>(j)]; ++i)
      centers[j][i] = box.lower[j] + (i + 0.5) * h[j];
  }

  // Source values at the cell centers, z index fastest.
  Eigen::VectorXd g_cell(static_cast<Eigen::Index>(n0) * n1 * n2);
  {
    Point c(3);
    Eigen::Index idx = 0;
    for (int i0 = 0; i0 < n0; ++i0)
      for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
          c << centers[0][i0], centers[1][i1], centers[2][i2];
          g_cell[idx++] = eval_forcing(problem.source, c)[0];
        }
  }

  const cd k = std::sqrt(problem.medium.kc2());  // principal branch
  FieldOnPoints f;
  f.points = query;
  f.p_r.resize(query.rows());
  f.p_i.resize(query.rows());

  for (Eigen::Index q = 0; q < query.rows(); ++q) {
    const double qx = query(q, 0), qy = query(q, 1), qz = query(q, 2);
    int self[3];
    for (int j = 0; j < 3; ++j) {
      const int i = static_cast<int>(
          std::floor((query(q, j) - box.lower[j]) / h[j]));
      self[j] = std::clamp(i, 0, grid_n[static_cast<std::size_t>(j)] - 1);
    }
    cd acc = 0.0;
    Eigen::Index idx = 0;
    for (int i0 = 0; i0 < n0; ++i0) {
      const double dx = qx - centers[0][i0];
      for (int i1 = 0; i1 < n1; ++i1) {
        const double dy = qy - centers[1][i1];
        for (int i2 = 0; i2 < n2; ++i2, ++idx) {
          if (i0 == self[0] && i1 == self[1] && i2 == self[2]) continue;
          const double dz = qz - centers[2][i2];
          const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
          acc += g_cell[idx] * std::exp(cd(0.0, 1.0) * k * r) /
                 (4.0 * M_PI * r);
        }
      }
    }
    // The strong form is (Delta + kc^2) p = -k0^2 g, so the free-field
    // particular solution carries the k0^2 source scaling.
    acc *= dv * problem.medium.k0() * problem.medium.k0();
    f.p_r[q] = acc.real();
    f.p_i[q] = acc.imag();
  }
  return f;
}

// ---------------------------------------------------------------------------
// Evaluation grids
// ---------------------------------------------------------------------------

std::vector<Eigen::VectorXd> make_eval_axes(const BoxDomain& domain,
                                            int per_axis) {
  if (per_axis < 2) throw std::invalid_argument("need >= 2 points per axis");
  std::vector<Eigen::VectorXd> axes;
  for (int j = 0; j < domain.dim; ++j)
    axes.push_back(Eigen::VectorXd::LinSpaced(per_axis, domain.lower[j],
                                              domain.upper[j]));
  return axes;
}

Eigen::MatrixXd tensor_points(const std::vector<Eigen::VectorXd>& axes) {
  const int d = static_cast<int>(axes.size());
  Eigen::Index total = 1;
  for (const auto& ax : axes) total *= ax.size();
  Eigen::MatrixXd pts(total, d);
  Eigen::Index idx = 0;
  if (d == 2) {
    for (Eigen::Index g0 = 0; g0 < axes[0].size(); ++g0)
      for (Eigen::Index g1 = 0; g1 < axes[1].size(); ++g1, ++idx) {
        pts(idx, 0) = axes[0][g0];
        pts(idx, 1) = axes[1][g1];
      }
  } else {
    for (Eigen::Index g0 = 0; g0 < axes[0].size(); ++g0)
      for (Eigen::Index g1 = 0; g1 < axes[1].size(); ++g1)
        for (Eigen::Index g2 = 0; g2 < axes[2].size(); ++g2, ++idx) {
          pts(idx, 0) = axes[0][g0];
          pts(idx, 1) = axes[1][g1];
          pts(idx, 2) = axes[2][g2];
        }
  }
  return pts;
}

} // namespace helmpinn
