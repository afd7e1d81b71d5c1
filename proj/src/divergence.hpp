#pragma once

#include "ext_real.hpp"
#include "generator.hpp"
#include "pair.hpp"

namespace fdivlib {

/// Contribution of a single coordinate (p, q) to D_f(P||Q), as an IEEE
/// double with +inf allowed (suitable for hot loops).  Conventions:
///   p = q = 0          -> 0
///   p = 0 < q          -> q * f(0+)
///   q = 0 < p          -> p * f'(inf)   (0 * inf never arises here)
///   otherwise          -> q * f(p/q)
/// Never returns NaN for valid nonnegative inputs.
double divergence_term(const Generator& g, double p, double q);

/// D_f(P||Q) = sum_{q_j > 0} q_j f(p_j/q_j) + f'(inf) P{q = 0}.
/// Validates the pair.
ExtReal divergence(const Generator& g, const DiscretePair& pair);

/// Same sum without pair validation, for callers that already validated or
/// that iterate over raw coordinate arrays.
double divergence_unchecked(const Generator& g, const double* p,
                            const double* q, std::size_t n);

}  // namespace fdivlib
