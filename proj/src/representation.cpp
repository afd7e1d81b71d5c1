#include "representation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace fdivlib {

namespace {

// gap(s) = min(1, s) - psi(s), the nonnegative integrand of the
// representation.
double gap(const PsiCurve& curve, double s) {
  return std::min(1.0, s) - curve.eval(s);
}

}  // namespace

ExtReal integral_representation(const Generator& g, const PsiCurve& curve,
                                double abs_tol) {
  if (!g.second_derivative && g.atoms.empty())
    throw unsupported_generator(
        "generator '" + g.name +
        "' carries no curvature data (second derivative or atoms)");

  // Atomic part is exact: each atom (s0, w) contributes w * gap(s0).
  ExtReal total = 0.0;
  for (const Atom& a : g.atoms) total += scale(a.mass, ExtReal(gap(curve, a.location)));

  if (!g.second_derivative) return total;
  const auto& fpp = g.second_derivative;

  const std::vector<double>& knots = curve.knots();
  const double p_inf = curve.mass_at_infinity();

  // The gap vanishes identically below the first knot (where psi(s) = s)
  // and, when P{q = 0} = 0, above max(last knot, 1) as well.  Between those
  // limits it is piecewise linear with kinks at the knots and at s = 1, so
  // we integrate smooth panels split at every kink.
  double lo = 1.0, hi = 1.0;
  if (!knots.empty()) {
    lo = std::min(knots.front(), 1.0);
    hi = std::max(knots.back(), 1.0);
  }

  std::vector<double> breaks;
  breaks.push_back(lo);
  for (double k : knots)
    if (k > lo && k < hi) breaks.push_back(k);
  if (1.0 > lo && 1.0 < hi) breaks.push_back(1.0);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) {
                             return std::fabs(a - b) <=
                                    1e-14 * std::max(1.0, std::fabs(b));
                           }),
               breaks.end());

  const std::size_t pieces = breaks.size() + 1;  // panels + possible tail
  const double piece_tol = abs_tol / static_cast<double>(pieces);

  auto integrand = [&](double s) { return gap(curve, s) * fpp(s); };

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    if (i == 0 && a == 0.0) {
      // First panel may touch s = 0 where f'' can blow up (the gap decays
      // linearly there); integrate with endpoint-singularity handling.
      ExtReal part = integrate_power_endpoint(integrand, b, piece_tol);
      if (part.is_infinite()) return ExtReal::infinity();
      total += part;
    } else {
      total += adaptive_simpson(integrand, a, b, piece_tol).value;
    }
  }

  // Tail beyond the last kink: gap(s) = P{q = 0} exactly, so the integral
  // diverges precisely when the curvature has infinite mass at infinity.
  if (p_inf > 0.0) {
    // Map s in [hi, inf) to u = 1/(1+s) in (0, u_hi]; ds = du/u^2.
    const double u_hi = 1.0 / (1.0 + hi);
    auto tail = [&](double u) {
      const double s = (1.0 - u) / u;
      return p_inf * fpp(s) / (u * u);
    };
    ExtReal part = integrate_power_endpoint(tail, u_hi, piece_tol);
    if (part.is_infinite()) return ExtReal::infinity();
    total += part;
  }

  return total;
}

}  // namespace fdivlib
