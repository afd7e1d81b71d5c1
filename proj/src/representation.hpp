#pragma once

#include "ext_real.hpp"
#include "generator.hpp"
#include "psi.hpp"

namespace fdivlib {

/// Evaluate the divergence through its testing representation:
///
///   I_f(psi) = integral of (min(1,s) - psi(s)) against the curvature of f
///            = int (min(1,s) - psi(s)) f''(s) ds
///              + sum over atoms (s0, w):  w * (min(1,s0) - psi(s0)).
///
/// For a curve built from a pair this equals divergence(g, pair), which makes
/// the function a cross-validation oracle for the direct sum.  `abs_tol` is
/// the absolute quadrature tolerance per smooth piece (default 1e-9 at call
/// sites).  Throws unsupported_generator when g carries no curvature data.
ExtReal integral_representation(const Generator& g, const PsiCurve& curve,
                                double abs_tol);

}  // namespace fdivlib
