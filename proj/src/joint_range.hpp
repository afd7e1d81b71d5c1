#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ext_real.hpp"
#include "generator.hpp"
#include "pair.hpp"
#include "solver.hpp"

namespace fdivlib {

/// One sampled point of the joint range: the divergence vector together
/// with the pair that produced it (every point is reproducible).
struct RangePoint {
  std::vector<ExtReal> values;
  DiscretePair source;
};

struct RangeCloud {
  std::vector<Generator> generators;
  std::vector<RangePoint> points;
  std::size_t n_used = 0;
  std::uint64_t seed = 0;
  std::size_t requested_count = 0;
};

/// Draw `count` pairs on n points from a seeded deterministic sampler
/// (uniform on each simplex by exponential spacings, with one coordinate
/// zeroed with probability 1/4 to populate the boundary strata), evaluate
/// every generator on each pair, and append the two deterministic corner
/// pairs (p = q, giving the all-zero point, and a mutually singular pair,
/// giving the componentwise maximum).  The cloud is sorted into a canonical
/// order, so identical inputs give identical clouds regardless of how the
/// work is split.
RangeCloud sample_joint_range(const std::vector<Generator>& gs, std::size_t n,
                              std::size_t count, std::uint64_t seed);

struct EnvelopeViolation {
  std::size_t point_index = 0;
  double x = 0.0;      // constraint-coordinate value
  double y = 0.0;      // objective-coordinate value
  double lower = 0.0;  // interpolated lower envelope at x
  double upper = 0.0;  // interpolated upper envelope at x (+inf possible)
  double excess = 0.0; // distance outside [lower - tol, upper + tol]
};

struct EnvelopeReport {
  std::size_t points_checked = 0;
  std::size_t points_skipped = 0;  // non-finite constraint coordinate
  double tolerance = 0.0;
  std::vector<double> grid;        // envelope abscissae
  std::vector<double> lower;       // sharp lower bound at each abscissa
  std::vector<double> upper;       // sharp upper bound (+inf possible)
  std::vector<EnvelopeViolation> violations;
};

/// For a two-generator cloud, solve the sharp upper/lower bounds of the
/// objective coordinate given the other coordinate at 20 abscissae and
/// check that every point lies between the interpolated envelopes within
/// 10 * opts.objective_tol.  Violations are report content, not errors.
EnvelopeReport envelope_check(const RangeCloud& cloud,
                              std::size_t objective_index,
                              const SolverOptions& opts = {});

/// CSV export: header row, then one row per point with the divergence
/// values (17 significant digits, "inf" for unbounded components) followed
/// by the flattened source pair.
std::string cloud_to_csv(const RangeCloud& cloud);

}  // namespace fdivlib
