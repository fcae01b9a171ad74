#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "helmpinn/physics.hpp"

namespace helmpinn {

/// Point counts from the points-per-wavelength rule:
/// n_i = round(ppw L_i / lambda) clamped to >= 2.
struct SampleCounts {
  std::vector<int> per_axis;
  std::int64_t n_interior = 0;
  std::int64_t n_boundary = 0;
};

/// Collocation points of one wall. face == 2*axis + side (side 1 = upper),
/// normal is the outward axis-aligned unit vector.
struct FaceSamples {
  int face = 0;
  int axis = 0;
  int side = 0;
  Point normal;
  Eigen::MatrixXd points;
};

struct SampleSet {
  Eigen::MatrixXd interior;  // n_interior x dim
  std::vector<FaceSamples> boundary;
  std::uint64_t seed = 0;
  double ppw = 0.0;
  SampleCounts counts;

  std::int64_t boundary_total() const;
};

SampleCounts count_points(double ppw, const HelmholtzProblem& problem);

/// Interior points uniform over the open box, per-face points uniform over
/// each face, all from one seeded stream. Deterministic in (problem, ppw,
/// seed).
SampleSet sample(const HelmholtzProblem& problem, double ppw,
                 std::uint64_t seed);

/// Plain-text audit dump: one "kind face x [y z]" line per point.
void export_points(const SampleSet& samples, const std::string& path);

} // namespace helmpinn
