#include "closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace fdivlib {

namespace {

const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;  // 1/phi

/// Golden-section minimum of a unimodal function on [a, b] (endpoints never
/// evaluated).  Returns (argmin, min).
std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                     double a, double b) {
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 120 && (b - a) > 1e-15; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return (f1 <= f2) ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

/// Numeric convexity certificate on [a, b]: midpoint-chord test over a
/// uniform grid of interior points.  Infinite samples fail the certificate
/// conservatively (the dense fallback handles them).
bool convex_on_interval(const std::function<double(double)>& f, double a,
                        double b) {
  constexpr int kGrid = 41;
  std::vector<double> v(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    double t = a + (b - a) * (i + 1) / (kGrid + 1);
    v[i] = f(t);
    if (!std::isfinite(v[i])) return false;
  }
  for (int i = 0; i + 2 < kGrid; ++i) {
    double scale = std::max({1.0, std::fabs(v[i]), std::fabs(v[i + 2])});
    if (v[i + 1] > 0.5 * (v[i] + v[i + 2]) + 1e-10 * scale) return false;
  }
  return true;
}

}  // namespace

ClosedFormResult gilardoni_b_tv(const Generator& g, double V) {
  if (!(V >= 0.0 && V <= 1.0))
    throw std::domain_error("total variation bound must lie in [0, 1]");

  ClosedFormResult r;
  r.formula_id = "tv-lower-variational";
  if (V == 0.0) {
    r.value = 0.0;
    r.parameter = 0.0;
    return r;
  }

  // T(q, V) with endpoints by analytic limits.
  auto T = [&](double q) -> ExtReal {
    ExtReal first = 0.0, second = 0.0;
    if (q >= 1.0) {
      // q = 1 only possible when V = 0 (handled above); guard anyway.
      first = 0.0;
    } else {
      double arg = (1.0 - V - q) / (1.0 - q);
      first = (arg <= 0.0) ? scale(1.0 - q, g.f_at_zero)
                           : ExtReal((1.0 - q) * g.eval_fn(arg));
    }
    if (q == 0.0) {
      second = scale(V, g.f_prime_at_infinity);
    } else {
      second = ExtReal(q * g.eval_fn((q + V) / q));
    }
    return first + second;
  };

  const double hi = 1.0 - V;
  if (hi <= 0.0) {
    // V = 1: the interval collapses to q = 0, the mutually singular limit.
    r.value = T(0.0);
    r.parameter = 0.0;
    return r;
  }

  auto Td = [&](double q) { return T(q).as_double(); };
  auto [qs, vs] = golden_min(Td, 0.0, hi);

  // Convexity makes the interior search exact, but the infimum may sit at an
  // endpoint; compare against both analytic endpoint values.
  double best_q = qs, best_v = vs;
  for (double q : {0.0, hi}) {
    double v = Td(q);
    if (v < best_v) {
      best_v = v;
      best_q = q;
    }
  }
  r.value = std::isinf(best_v) ? ExtReal::infinity() : ExtReal(best_v);
  r.parameter = best_q;
  return r;
}

double symmetric_b_tv(const Generator& g, double V) {
  if (!g.symmetric)
    throw std::invalid_argument(
        "closed form requires a generator with the exact symmetry f(x) = x f(1/x)");
  if (!(V >= 0.0 && V <= 1.0))
    throw std::domain_error("total variation bound must lie in [0, 1]");
  if (V == 0.0) return 0.0;
  if (V == 1.0) return g.max_divergence_value().as_double();
  return (1.0 - V) * g.eval_fn((1.0 + V) / (1.0 - V));
}

ClosedFormResult primitive_constraint_b(const Generator& g, double s,
                                        double D) {
  if (!(s > 0.0)) throw std::domain_error("kink location s must be positive");
  const double dmax = std::min(1.0, s);
  if (!(D >= 0.0 && D <= dmax))
    throw std::domain_error("constraint level must lie in [0, min(1, s)]");

  if (s == 1.0) {
    // The kink-at-1 divergence is total variation; reuse its formula so the
    // two paths agree exactly.
    ClosedFormResult r = gilardoni_b_tv(g, D);
    r.formula_id = "kink-lower-variational";
    return r;
  }

  ClosedFormResult r;
  r.formula_id = "kink-lower-variational";
  if (D == 0.0) {
    r.value = 0.0;
    r.parameter = 0.0;
    return r;
  }

  const double H = dmax - D;
  const double qhi = H / s;

  auto G = [&](double q) -> double {
    ExtReal first = 0.0, second = 0.0;
    if (q < 1.0) {
      double arg = (H - q * s) / (1.0 - q);
      first = (arg <= 0.0) ? scale(1.0 - q, g.f_at_zero)
                           : ExtReal((1.0 - q) * g.eval_fn(arg));
    }
    if (q == 0.0) {
      // q f((1 + qs - H)/q) -> (1 - H) f'(inf)
      second = scale(1.0 - H, g.f_prime_at_infinity);
    } else {
      double arg = (1.0 + q * s - H) / q;
      second = (arg <= 0.0) ? 0.0 : ExtReal(q * g.eval_fn(arg));
    }
    return (first + second).as_double();
  };

  if (qhi <= 0.0) {
    // D = min(1, s): only q = 0 remains.
    r.value = std::isinf(G(0.0)) ? ExtReal::infinity() : ExtReal(G(0.0));
    r.parameter = 0.0;
    return r;
  }

  double best_q, best_v;
  if (convex_on_interval(G, 0.0, qhi)) {
    auto [qs_, vs_] = golden_min(G, 0.0, qhi);
    best_q = qs_;
    best_v = vs_;
  } else {
    // Convexity not certified: dense scan at absolute step 1e-6, then a
    // local golden polish around the best sample.
    const double step = 1e-6;
    best_q = 0.0;
    best_v = G(0.0);
    const long steps = static_cast<long>(qhi / step);
    for (long i = 1; i <= steps; ++i) {
      double q = static_cast<double>(i) * step;
      if (q > qhi) break;
      double v = G(q);
      if (v < best_v) {
        best_v = v;
        best_q = q;
      }
    }
    auto [qs_, vs_] = golden_min(G, std::max(0.0, best_q - 2 * step),
                                 std::min(qhi, best_q + 2 * step));
    if (vs_ < best_v) {
      best_q = qs_;
      best_v = vs_;
    }
  }
  for (double q : {0.0, qhi}) {
    double v = G(q);
    if (v < best_v) {
      best_v = v;
      best_q = q;
    }
  }
  r.value = std::isinf(best_v) ? ExtReal::infinity() : ExtReal(best_v);
  r.parameter = best_q;
  return r;
}

ExtReal tv_constraint_a(const Generator& g, double V) {
  if (!(V >= 0.0 && V <= 1.0))
    throw std::domain_error("total variation bound must lie in [0, 1]");
  return scale(V, g.max_divergence_value());
}

double chi2_a(const Generator& f1, double D) {
  if (!(D >= 0.0))
    throw std::domain_error("constraint level must be nonnegative");

  auto h = [&](double x) { return (1.0 + f1.eval_fn(x)) / x; };

  // Certificate: strictly increasing and strictly convex on a log-spaced
  // grid.  The left edge stays at 0.1: generators with f(0) = -1 drive
  // 1 + f(x) into catastrophic cancellation as x -> 0 (the exact sum is
  // ~x^l while the floating-point sum bottoms out at machine epsilon), so
  // sampling further left would certify rounding noise, not the function.
  {
    constexpr int kGrid = 61;
    std::vector<double> xs(kGrid), hs(kGrid);
    for (int i = 0; i < kGrid; ++i) {
      xs[i] = std::pow(10.0, -1.0 + 7.0 * i / (kGrid - 1));
      hs[i] = h(xs[i]);
    }
    for (int i = 0; i + 1 < kGrid; ++i) {
      if (!(hs[i + 1] > hs[i] + 1e-12 * std::max(1.0, std::fabs(hs[i]))))
        throw unsupported_generator(
            "(1 + f(x))/x is not strictly increasing; inversion theorem "
            "hypotheses fail");
    }
    for (int i = 0; i + 2 < kGrid; ++i) {
      if (!std::isfinite(hs[i + 2])) continue;  // overflow tail: skip
      double lam = (xs[i + 2] - xs[i + 1]) / (xs[i + 2] - xs[i]);
      double chord = lam * hs[i] + (1.0 - lam) * hs[i + 2];
      double scale = std::max({1.0, std::fabs(hs[i]), std::fabs(hs[i + 2])});
      if (!(hs[i + 1] < chord - 1e-12 * scale))
        throw unsupported_generator(
            "(1 + f(x))/x is not strictly convex; inversion theorem "
            "hypotheses fail");
    }
  }

  if (D == 0.0) return 0.0;
  const double target = 1.0 + D;  // h(1) = 1 and h increases beyond 1

  double lo = 1.0, hi = 2.0;
  int grow = 0;
  while (h(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 200 || !std::isfinite(hi))
      throw unsupported_generator(
          "(1 + f(x))/x never reaches the requested level; inversion "
          "impossible");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (h(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) - 1.0;
}

double power_chi2_a(double l, double D) {
  if (!(l > 2.0))
    throw std::invalid_argument("power exponent must exceed 2");
  if (!(D >= 0.0))
    throw std::domain_error("constraint level must be nonnegative");
  return std::pow(1.0 + D, 1.0 / (l - 1.0)) - 1.0;
}

double pinsker_reference(double V) {
  if (!(V >= 0.0 && V <= 1.0))
    throw std::domain_error("total variation value must lie in [0, 1]");
  return 2.0 * V * V;
}

std::pair<double, double> topsoe_bounds(double delta) {
  if (!(delta >= 0.0 && delta <= 2.0))
    throw std::domain_error("triangular discrimination lies in [0, 2]");
  return {0.5 * delta, std::log(2.0) * delta};
}

}  // namespace fdivlib
