#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fdivlib {

namespace {

struct SimpsonCtx {
  const std::function<double(double)>* f;
  long evaluations = 0;
  bool converged = true;
  double error_accum = 0.0;
};

double simpson_rec(SimpsonCtx& ctx, double a, double fa, double m, double fm,
                   double b, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = (*ctx.f)(lm), frm = (*ctx.f)(rm);
  ctx.evaluations += 2;
  const double h6 = (b - a) / 12.0;
  const double left = h6 * (fa + 4.0 * flm + fm);
  const double right = h6 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol || depth <= 0) {
    if (depth <= 0 && std::fabs(delta) > 15.0 * tol) ctx.converged = false;
    ctx.error_accum += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_rec(ctx, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(ctx, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a,
                            double b, double abs_tol, int max_depth) {
  QuadResult r;
  if (!(b > a)) return r;
  SimpsonCtx ctx;
  ctx.f = &f;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  ctx.evaluations = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  r.value = simpson_rec(ctx, a, fa, m, fm, b, fb, whole, abs_tol, max_depth);
  r.evaluations = ctx.evaluations;
  r.converged = ctx.converged;
  r.error_estimate = ctx.error_accum;
  return r;
}

ExtReal integrate_power_endpoint(const std::function<double(double)>& f,
                                 double b, double abs_tol) {
  if (!(b > 0.0)) return ExtReal(0.0);

  // Sample on a geometric ladder toward 0 and fit the local exponent.
  constexpr double kStep = 4.0;
  constexpr int kRungs = 20;
  std::vector<double> us, hs;
  double u = b / kStep;
  for (int k = 0; k < kRungs; ++k) {
    us.push_back(u);
    hs.push_back(f(u));
    u /= kStep;
  }

  // Exponent estimates from the deepest rungs with nonzero samples.
  std::vector<double> betas;
  for (std::size_t k = hs.size() - 1; k >= hs.size() - 6 && k > 0; --k) {
    if (hs[k] > 0.0 && hs[k - 1] > 0.0)
      betas.push_back(std::log(hs[k] / hs[k - 1]) / std::log(us[k] / us[k - 1]));
  }

  if (!betas.empty()) {
    std::sort(betas.begin(), betas.end());
    const double beta = betas[betas.size() / 2];
    // beta <= -1 means the partial integrals over (eps, b] blow past any
    // threshold as eps -> 0: the represented value is +infinity.
    if (beta <= -0.98) return ExtReal::infinity();

    const double eps = b * 1e-12;
    QuadResult inner = adaptive_simpson(f, eps, b, abs_tol);
    // Close (0, eps] with the fitted power law: integral of C u^beta.
    const double remainder = f(eps) * eps / (beta + 1.0);
    return ExtReal(inner.value + remainder);
  }

  // Integrand vanishes near 0; integrate the visible part.
  QuadResult inner = adaptive_simpson(f, b * 1e-12, b, abs_tol);
  return ExtReal(inner.value);
}

}  // namespace fdivlib
