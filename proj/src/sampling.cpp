#include "helmpinn/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "helmpinn/rng.hpp"

namespace helmpinn {

std::int64_t SampleSet::boundary_total() const {
  std::int64_t n = 0;
  for (const auto& f : boundary) n += f.points.rows();
  return n;
}

SampleCounts count_points(double ppw, const HelmholtzProblem& problem) {
  if (!(ppw > 0.0)) throw std::invalid_argument("ppw must be > 0");
  problem.validate();
  const double lambda = problem.medium.wavelength();
  const int d = problem.domain.dim;

  SampleCounts c;
  c.n_interior = 1;
  for (int i = 0; i < d; ++i) {
    const int n = std::max<long>(
        2, std::lround(ppw * problem.domain.length(i) / lambda));
    c.per_axis.push_back(n);
    c.n_interior *= n;
  }
  c.n_boundary = 0;
  for (int axis = 0; axis < d; ++axis) {
    std::int64_t tangential = 1;
    for (int t = 0; t < d; ++t)
      if (t != axis) tangential *= c.per_axis[static_cast<std::size_t>(t)];
    c.n_boundary += 2 * tangential;  // the two faces normal to `axis`
  }
  return c;
}

SampleSet sample(const HelmholtzProblem& problem, double ppw,
                 std::uint64_t seed) {
  const SampleCounts counts = count_points(ppw, problem);
  const BoxDomain& box = problem.domain;
  const int d = box.dim;
  Rng rng(seed);

  SampleSet s;
  s.seed = seed;
  s.ppw = ppw;
  s.counts = counts;

  s.interior.resize(counts.n_interior, d);
  for (Eigen::Index p = 0; p < s.interior.rows(); ++p)
    for (int j = 0; j < d; ++j)
      s.interior(p, j) = rng.uniform(box.lower[j], box.upper[j]);

  for (int axis = 0; axis < d; ++axis) {
    std::int64_t tangential = 1;
    for (int t = 0; t < d; ++t)
      if (t != axis) tangential *= counts.per_axis[static_cast<std::size_t>(t)];
    for (int side = 0; side < 2; ++side) {
      FaceSamples face;
      face.face = 2 * axis + side;
      face.axis = axis;
      face.side = side;
      face.normal = Point::Zero(d);
      face.normal[axis] = side == 0 ? -1.0 : 1.0;
      face.points.resize(tangential, d);
      for (Eigen::Index p = 0; p < tangential; ++p)
        for (int j = 0; j < d; ++j)
          face.points(p, j) =
              j == axis ? (side == 0 ? box.lower[j] : box.upper[j])
                        : rng.uniform(box.lower[j], box.upper[j]);
      s.boundary.push_back(std::move(face));
    }
  }
  return s;
}

void export_points(const SampleSet& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[128];
  auto write_row = [&](const char* kind, int face, const auto& row) {
    out << kind << ' ' << face;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof(buf), " %.17g", row[j]);
      out << buf;
    }
    out << '\n';
  };
  for (Eigen::Index p = 0; p < samples.interior.rows(); ++p)
    write_row("interior", -1, samples.interior.row(p));
  for (const auto& f : samples.boundary)
    for (Eigen::Index p = 0; p < f.points.rows(); ++p)
      write_row("boundary", f.face, f.points.row(p));
}

} // namespace helmpinn
