#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "closed_forms.hpp"
#include "convex.hpp"
#include "divergence.hpp"
#include "generator.hpp"
#include "representation.hpp"

namespace fdivlib {

namespace {

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CheckResult finish(std::string name, double max_residual, double tol,
                   std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.max_residual = max_residual;
  r.tolerance = tol;
  r.passed = max_residual <= tol;
  r.detail = std::move(detail);
  return r;
}

/// Random pair in the interior of the simplex (all entries >= floor).
DiscretePair random_interior_pair(SplitMix64& rng, std::size_t n,
                                  double floor_mass) {
  auto draw = [&]() {
    std::vector<double> v(n);
    double sum = 0.0;
    for (auto& x : v) {
      x = -std::log(rng.uniform_pos());
      sum += x;
    }
    const double scale = 1.0 - static_cast<double>(n) * floor_mass;
    for (auto& x : v) x = floor_mass + scale * (x / sum);
    return v;
  };
  return DiscretePair(draw(), draw());
}

ConstraintSpec at_most(const Generator& g, double bound) {
  ConstraintSpec c;
  c.generator = g;
  c.bound = ExtReal(bound);
  c.at_least = false;
  return c;
}

ConstraintSpec at_least(const Generator& g, double bound) {
  ConstraintSpec c;
  c.generator = g;
  c.bound = ExtReal(bound);
  c.at_least = true;
  return c;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& vopts) {
  std::vector<CheckResult> out;
  const SolverOptions& so = vopts.solver;
  const double engine_tol = 5.0 * so.objective_tol;

  const Generator tv = make_generator("tv");
  const Generator kl = make_generator("kl");
  const Generator hellinger = make_generator("hellinger");
  const Generator chi2 = make_generator("chi2");
  const Generator triangular = make_generator("triangular");
  const Generator capacitory = make_generator("capacitory");

  // 1. Sharpest TV given a squared-Hellinger budget vs its closed form
  //    sqrt(2H) * sqrt(1 - H/2).
  {
    double worst = 0.0;
    for (double H : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double engine =
          solve_A(tv, {at_most(hellinger, H)}, so).value.as_double();
      const double closed = std::sqrt(2.0 * H) * std::sqrt(1.0 - H / 2.0);
      worst = std::max(worst, std::fabs(engine - closed));
    }
    out.push_back(finish("tv-under-hellinger-closed-form", worst, engine_tol));
  }

  // 2. Sharpest KL given a total-variation floor vs the variational
  //    closed form.
  {
    double worst = 0.0;
    for (double V : {0.2, 0.5, 0.8}) {
      const double engine =
          solve_B(kl, {at_least(tv, V)}, so).value.as_double();
      const double closed = gilardoni_b_tv(kl, V).value.as_double();
      worst = std::max(worst, std::fabs(engine - closed));
    }
    out.push_back(finish("kl-under-tv-variational-form", worst, engine_tol));
  }

  // 3. Curvature-integral identity: the divergence equals the integral of
  //    the curve gaps against the generator's curvature.
  {
    SplitMix64 rng(0x7a1e5u);
    double worst = 0.0;
    const std::vector<Generator> gens = {kl, chi2, hellinger, triangular,
                                         capacitory};
    for (int i = 0; i < 25; ++i) {
      const DiscretePair pair = random_interior_pair(rng, 5, 1e-3);
      const PsiCurve curve = PsiCurve::from_pair(pair);
      for (const auto& g : gens) {
        const double direct = divergence(g, pair).as_double();
        const double integral =
            integral_representation(g, curve, 1e-9).as_double();
        worst = std::max(worst, std::fabs(direct - integral));
      }
    }
    out.push_back(finish("curvature-integral-identity", worst, 1e-6));
  }

  // 4. The two symmetric-generator closed forms agree.
  {
    double worst = 0.0;
    for (const Generator* g : {&tv, &hellinger, &triangular, &capacitory})
      for (int k = 1; k <= 9; ++k) {
        const double V = 0.1 * k;
        worst = std::max(worst, std::fabs(symmetric_b_tv(*g, V) -
                                          gilardoni_b_tv(*g, V)
                                              .value.as_double()));
      }
    out.push_back(finish("symmetric-closed-form-agreement", worst, 1e-9));
  }

  // 5. Convex decomposition vs the grid engine for the total-variation
  //    objective (the negative-control flag corrupts this one).
  {
    SolverOptions convex_opts = so;
    convex_opts.debug_drop_half_factor = vopts.corrupt_half_factor;
    double worst = 0.0;
    const Generator prim1 = make_generator("primitive", {1.0});
    for (double H : {0.2, 0.5, 0.8}) {
      const double via_convex =
          solve_A_primitive_convex(1.0, {at_most(hellinger, H)}, convex_opts)
              .value.as_double();
      const double via_grid =
          solve_A(prim1, {at_most(hellinger, H)}, so).value.as_double();
      worst = std::max(worst, std::fabs(via_convex - via_grid));
    }
    out.push_back(finish("convex-grid-agreement", worst, engine_tol,
                         vopts.corrupt_half_factor
                             ? "negative control: half factor dropped"
                             : ""));
  }

  // 6. Kink-constrained lower bound: closed form vs engine, plus exact
  //    delegation at s = 1.
  {
    double worst = 0.0;
    const Generator prim2 = make_generator("primitive", {2.0});
    const double closed =
        primitive_constraint_b(kl, 2.0, 0.3).value.as_double();
    const double engine =
        solve_B(kl, {at_least(prim2, 0.3)}, so).value.as_double();
    worst = std::max(worst, std::fabs(closed - engine));
    out.push_back(finish("kink-lower-bound-engine-agreement", worst,
                         engine_tol));

    double deleg = 0.0;
    for (const Generator* g : {&kl, &hellinger})
      for (double D : {0.2, 0.6})
        deleg = std::max(
            deleg, std::fabs(primitive_constraint_b(*g, 1.0, D)
                                 .value.as_double() -
                             gilardoni_b_tv(*g, D).value.as_double()));
    out.push_back(finish("kink-at-one-reduces-to-tv", deleg, 1e-12));
  }

  // 7. Chi-squared inverse-function bound vs the power-family closed form.
  {
    double worst = 0.0;
    for (double l : {3.0, 4.0})
      for (double D : {0.5, 3.0}) {
        const Generator pw = make_generator("power", {l});
        worst = std::max(worst,
                         std::fabs(chi2_a(pw, D) - power_chi2_a(l, D)));
      }
    out.push_back(finish("chi2-inverse-function-bound", worst, 1e-12));
  }

  // 8. Linear upper envelope for the capacitory/triangular trade-off.
  {
    double worst = 0.0;
    for (double d : {0.6, 1.2, 1.8}) {
      const double engine =
          solve_A(capacitory, {at_most(triangular, d)}, so).value.as_double();
      worst = std::max(worst, std::fabs(engine - topsoe_bounds(d).second));
    }
    out.push_back(finish("capacitory-upper-envelope", worst, engine_tol));
  }

  // 9. Every reported argpair reproduces its value and passes independent
  //    feasibility re-evaluation.
  {
    double worst_val = 0.0, worst_feas = 0.0;
    struct Case {
      const Generator* obj;
      ConstraintSpec con;
      bool minimize;
    };
    const std::vector<Case> cases = {
        {&tv, at_most(hellinger, 0.4), false},
        {&capacitory, at_most(triangular, 1.0), false},
        {&kl, at_least(tv, 0.5), true},
        {&hellinger, at_least(tv, 0.6), true},
    };
    for (const auto& c : cases) {
      const BoundResult r = c.minimize ? solve_B(*c.obj, {c.con}, so)
                                       : solve_A(*c.obj, {c.con}, so);
      const double direct = divergence(*c.obj, r.argpair).as_double();
      worst_val = std::max(worst_val,
                           std::fabs(direct - r.value.as_double()));
      const double d = divergence(c.con.generator, r.argpair).as_double();
      const double b = c.con.bound.as_double();
      const double viol =
          c.con.at_least ? std::max(0.0, b - d) : std::max(0.0, d - b);
      worst_feas = std::max(worst_feas, viol);
    }
    out.push_back(finish("argpair-reproduces-value", worst_val, engine_tol));
    out.push_back(finish("argpair-feasible-on-recheck", worst_feas,
                         so.feasibility_tol,
                         "max violation " + fmt(worst_feas)));
  }

  return out;
}

}  // namespace fdivlib
