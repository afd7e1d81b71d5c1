#pragma once

#include <functional>

#include "ext_real.hpp"

namespace fdivlib {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
};

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance
/// abs_tol.  The integrand must be finite on [a, b]; it is assumed smooth
/// except possibly at the endpoints.  Bisection recurses until the local
/// Richardson error estimate |S2 - S1|/15 meets the (halved per level)
/// tolerance or the depth cap is reached.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a,
                            double b, double abs_tol, int max_depth = 52);

/// Integral over (0, b] of a nonnegative integrand that behaves like a power
/// C * u^beta as u -> 0+ (beta estimated from samples on a geometric ladder).
///
/// Returns +inf when the fitted exponent says the integral diverges
/// (beta <= -1): in that case every partial integral over (eps, b]
/// grows without bound as eps -> 0, which is the threshold criterion for
/// declaring the represented divergence infinite.  Otherwise integrates
/// [b*1e-12, b] adaptively and closes the gap with the fitted power law.
ExtReal integrate_power_endpoint(const std::function<double(double)>& f,
                                 double b, double abs_tol);

}  // namespace fdivlib
