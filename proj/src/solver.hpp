#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "divergence.hpp"
#include "ext_real.hpp"
#include "generator.hpp"
#include "pair.hpp"

namespace fdivlib {

/// One divergence constraint: D_g(P||Q) <= bound (at_least = false) or
/// D_g(P||Q) >= bound (at_least = true).  Bounds are nonnegative; an
/// at-most bound of +inf marks an inactive constraint.
struct ConstraintSpec {
  Generator generator;
  ExtReal bound = 0.0;
  bool at_least = false;
};

enum class SolveStatus { optimal_within_tol, infeasible, unbounded };
const char* to_string(SolveStatus s);

/// Flat option set shared by every solver entry point.  No randomness is
/// used anywhere: identical options give identical results, independent of
/// thread count.
struct SolverOptions {
  double grid_step = 0.02;      ///< coarse lattice step on each coordinate
  int refine_rounds = 4;        ///< box-refinement rounds (factor 0.1 each)
  double objective_tol = 1e-3;  ///< reported accuracy of optimal values
  double feasibility_tol = 1e-9;
  int threads = 1;              ///< workers for the coarse scan
  bool disable_constraint_dropping = false;  ///< keep unbounded-generator
                                             ///< at-least constraints
  bool debug_drop_half_factor = false;  ///< deliberately corrupt the convex
                                        ///< recombination (negative control)
};

struct Diagnostics {
  std::uint64_t evaluations = 0;
  int refine_rounds_used = 0;
  int polish_sweeps = 0;
  double objective_residual = 0.0;        ///< |recomputed objective - value|
  double max_constraint_violation = 0.0;  ///< from independent re-evaluation
  std::size_t constraints_dropped = 0;
  bool fast_path = false;
  std::string note;
};

struct BoundResult {
  ExtReal value = 0.0;
  DiscretePair argpair;
  std::size_t n_used = 0;
  SolveStatus status = SolveStatus::optimal_within_tol;
  Diagnostics diagnostics;
};

/// Optimize divergence(objective, (P,Q)) over pairs of probability vectors
/// on n points, subject to the constraints.  Directions must be consistent:
/// all at-most when maximizing, all at-least when minimizing (mixed sets are
/// rejected).  Deterministic coarse-to-fine lattice search; see SolverOptions.
BoundResult solve_finite_dim(const Generator& objective,
                             const std::vector<ConstraintSpec>& constraints,
                             bool minimize, std::size_t n,
                             const SolverOptions& opts);

/// Sharp upper bound: sup D_obj subject to m at-most constraints.  Support
/// size m+2 suffices exactly, so this delegates to solve_finite_dim with
/// n = m+2 after dropping infinite bounds.
BoundResult solve_A(const Generator& objective,
                    const std::vector<ConstraintSpec>& constraints,
                    const SolverOptions& opts);

/// Sharp lower bound: inf D_obj subject to m at-least constraints, with the
/// dimension reductions:
///  (a) bounded objective: constraints with unbounded generators are droppable
///      (any of them can be satisfied at negligible objective cost); if all
///      are dropped the infimum is exactly 0 at p = q;
///  (b) all remaining constraints elementary piecewise-linear: n = m+1;
///  (c) otherwise n = m+2 with every remaining generator bounded;
///  (d) unbounded objective with an unbounded constraint generator: refused
///      (unsupported_case) -- no reduction theorem covers it.
BoundResult solve_B(const Generator& objective,
                    const std::vector<ConstraintSpec>& constraints,
                    const SolverOptions& opts);

namespace detail {

/// Linear functional sum_j sigma_j (p_j - s q_j): the objective of the
/// convex-decomposition subproblems.  The lattice machinery accepts it in
/// place of a generator divergence.
struct LinearObjective {
  std::vector<double> sigma;  // entries in {-1, +1}
  double s = 1.0;
};

/// Either a divergence objective or a linear functional (exactly one set).
struct LatticeObjective {
  const Generator* gen = nullptr;
  const LinearObjective* lin = nullptr;
};

struct Incumbent {
  bool found = false;
  double value = 0.0;
  std::vector<double> p, q;
};

/// Contiguous index ranges of p within which coordinates may be assumed
/// nonincreasing (valid when objective and constraints are invariant under
/// simultaneous permutation of those coordinates in both vectors).
using SortedSegments = std::vector<std::pair<std::size_t, std::size_t>>;

/// Exhaustive scan of the step-1/N simplex lattice for both vectors.
/// Returns up to `keep` incumbents, best first, at most one per support
/// signature (the zero pattern of p and q plus the per-coordinate sign of
/// p - q).  Structurally distinct near-optima seed independent refinements:
/// the box search is local and cannot hop between such basins, so keeping
/// only the single best coarse point can strand the pipeline in a basin
/// whose true optimum is inferior.
std::vector<Incumbent> coarse_scan(const LatticeObjective& obj,
                                   const std::vector<ConstraintSpec>& constraints,
                                   bool minimize, std::size_t n, int N,
                                   const SortedSegments& segments,
                                   std::size_t keep, const SolverOptions& opts,
                                   Diagnostics& diag);

/// Box refinement (refine_rounds width levels shrinking by 0.1, repeating
/// at each width while the value still improves, so the search can slide
/// along an active-constraint ridge) followed by coordinate-descent polish
/// with pairwise mass transfers, in place.
void refine_and_polish(const LatticeObjective& obj,
                       const std::vector<ConstraintSpec>& constraints,
                       bool minimize, Incumbent& inc,
                       const SolverOptions& opts, Diagnostics& diag);

/// Full pipeline used by the public entry points.
BoundResult lattice_optimize(const LatticeObjective& obj,
                             const std::vector<ConstraintSpec>& constraints,
                             bool minimize, std::size_t n,
                             const SortedSegments& segments,
                             const SolverOptions& opts);

}  // namespace detail

}  // namespace fdivlib
