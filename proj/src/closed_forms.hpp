#pragma once

#include <optional>
#include <string>
#include <utility>

#include "ext_real.hpp"
#include "generator.hpp"

namespace fdivlib {

/// Result of an analytic (possibly variational) formula: the value, the
/// optimizing parameter when the formula is a 1-d infimum, and an identifier
/// naming which formula produced it.
struct ClosedFormResult {
  ExtReal value = 0.0;
  std::optional<double> parameter;
  std::string formula_id;
};

/// Smallest possible D_g(P||Q) given total variation V(P,Q) >= V:
///   inf over q in [0, 1-V] of T(q, V),
///   T(q, V) = (1-q) f((1-V-q)/(1-q)) + q f((q+V)/q),
/// with the q -> 0 endpoint evaluated via its limit f(1-V) + V f'(inf).
/// T(., V) is convex, so golden-section search plus endpoint comparison is
/// exact up to arithmetic.  Requires 0 <= V <= 1.
ClosedFormResult gilardoni_b_tv(const Generator& g, double V);

/// The same lower bound in closed form for generators whose representative
/// satisfies f(x) = x f(1/x) exactly:  B(V) = (1-V) f((1+V)/(1-V)).
/// V = 1 returns the limit f(0) + f'(inf).  Requires g.symmetric.
double symmetric_b_tv(const Generator& g, double V);

/// Smallest possible D_g(P||Q) subject to the elementary piecewise-linear
/// divergence with kink at s being at least D:
///   inf over q in [0, H/s] of (1-q) f((H-qs)/(1-q)) + q f((1+qs-H)/q),
/// with H = min(1, s) - D.  Convexity of this objective is not guaranteed,
/// so a failed numeric convexity certificate falls back to a dense scan at
/// step 1e-6.  s = 1 reproduces gilardoni_b_tv exactly.
/// Requires s > 0 and 0 <= D <= min(1, s).
ClosedFormResult primitive_constraint_b(const Generator& g, double s,
                                        double D);

/// Largest possible D_g(P||Q) given total variation V(P,Q) <= V:
///   A(V) = V * (f(0) + f'(inf))   (extended real; 0 * inf = 0 at V = 0).
/// Requires 0 <= V <= 1.
ExtReal tv_constraint_a(const Generator& g, double V);

/// Largest possible chi-squared divergence subject to D_{f1} <= D:
///   A(D) = h^{-1}(D + 1) - 1   with h(x) = (1 + f1(x)) / x,
/// valid when h is strictly increasing and strictly convex; both properties
/// are certified numerically on a log-spaced grid before inverting h by
/// bisection (bracket doubled from x = 1) to 1e-12 relative accuracy.
/// Throws unsupported_generator when the certificate fails.
double chi2_a(const Generator& f1, double D);

/// Specialization of chi2_a to f1 = power(l):  A(D) = (1+D)^{1/(l-1)} - 1.
/// Requires l > 2 and D >= 0.
double power_chi2_a(double l, double D);

/// The classical quadratic lower reference for the KL/TV trade-off: 2 V^2.
/// Not sharp for any V != 0; gilardoni_b_tv(kl, V) strictly exceeds it.
double pinsker_reference(double V);

/// Two-sided linear reference bounds for the capacitory divergence C against
/// the triangular discrimination Delta:  Delta/2 <= C <= log(2) * Delta.
/// The upper bound is sharp; the lower is not.  Requires 0 <= delta <= 2.
std::pair<double, double> topsoe_bounds(double delta);

}  // namespace fdivlib
