#pragma once

#include <string>
#include <vector>

#include "solver.hpp"

namespace fdivlib {

/// One named self-check: an independent identity or oracle agreement that a
/// healthy build must satisfy.
struct CheckResult {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  SolverOptions solver;
  /// Negative control: deliberately corrupts the convex recombination so
  /// the convex/grid agreement check must fail.  Exercises the harness's
  /// ability to detect a broken build.
  bool corrupt_half_factor = false;
};

/// Run the oracle-agreement suite: closed forms vs the numeric engine, the
/// curvature-integral identity, the convex decomposition vs the grid path,
/// and argpair reproduction.  Checks scale their tolerances with
/// opts.solver.objective_tol where the engine is involved.
std::vector<CheckResult> run_verification(const VerifyOptions& opts = {});

}  // namespace fdivlib
