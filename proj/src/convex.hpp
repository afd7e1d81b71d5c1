#pragma once

#include <cstdint>
#include <vector>

#include "solver.hpp"

namespace fdivlib {

/// Nondecreasing vector in {-1,+1}^(m+2); for m constraints there are
/// exactly m+3 distinct patterns.
struct SignPattern {
  std::vector<int> sigma;
};

/// All nondecreasing sign vectors of length m+2, all-minus first, ordered
/// by the number of trailing +1 entries.
std::vector<SignPattern> sign_patterns(std::size_t m);

/// Maximize sum_j sigma_j (p_j - s q_j) over pairs of probability vectors
/// subject to at-most divergence constraints. Solved by a logarithmic
/// barrier on the constraint slacks (path-following, damped ascent with
/// central-difference gradients) refined by the box search; falls back to
/// the deterministic lattice engine when the barrier stalls or a bound is
/// too small to admit an interior.
double solve_conopt(const SignPattern& sigma, double s,
                    const std::vector<ConstraintSpec>& constraints,
                    const SolverOptions& opts = {});

/// Sharp upper bound for the piecewise-linear objective with threshold s
/// via the exact convex decomposition:
///   value = -|s-1|/2 + (1/2) * max over sign patterns of solve_conopt.
/// The 1/2 factor comes from min(a,b) = (a+b-|a-b|)/2; dropping it (the
/// debug option) inflates the result and is kept only as a negative
/// control for the self-check harness.
BoundResult solve_A_primitive_convex(double s,
                                     const std::vector<ConstraintSpec>& constraints,
                                     const SolverOptions& opts = {});

/// How much the joint two-constraint bound improves on the pointwise
/// minimum of the single-constraint bounds, for the total variation
/// objective under a squared-Hellinger bound H and a relative-entropy
/// bound K.
struct ImprovementResult {
  double improvement = 0.0;  // max(0, raw), the reported value
  double raw = 0.0;          // min(single_h, single_k) - joint, unclamped
  double single_h = 0.0;     // TV bound under the Hellinger constraint only
  double single_k = 0.0;     // TV bound under the KL constraint only
  double joint = 0.0;        // TV bound under both constraints
};

ImprovementResult improvement_over_pointwise_min(double H, double K,
                                                 const SolverOptions& opts = {});

namespace detail {

struct ConoptFull {
  double value = 0.0;
  std::vector<double> p, q;
  std::uint64_t evaluations = 0;
  bool used_barrier = false;
};

/// Barrier path: requires every kept bound strictly positive. `stalled`
/// reports whether the ascent failed to accept any step.
ConoptFull conopt_barrier(const SignPattern& sigma, double s,
                          const std::vector<ConstraintSpec>& kept,
                          const SolverOptions& opts, bool& stalled);

/// Lattice path: same problem through the deterministic coarse-to-fine
/// engine (block-sorted enumeration).
ConoptFull conopt_lattice(const SignPattern& sigma, double s,
                          const std::vector<ConstraintSpec>& kept,
                          const SolverOptions& opts);

/// Dispatcher used by solve_conopt / solve_A_primitive_convex; validates
/// input and picks the path.
ConoptFull conopt_full(const SignPattern& sigma, double s,
                       const std::vector<ConstraintSpec>& constraints,
                       const SolverOptions& opts);

}  // namespace detail

}  // namespace fdivlib
