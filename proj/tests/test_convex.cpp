#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "convex.hpp"
#include "doctest.h"
#include "generator.hpp"
#include "oracles.hpp"
#include "solver.hpp"

using fdivlib::BoundResult;
using fdivlib::ConstraintSpec;
using fdivlib::ExtReal;
using fdivlib::Generator;
using fdivlib::ImprovementResult;
using fdivlib::improvement_over_pointwise_min;
using fdivlib::make_generator;
using fdivlib::sign_patterns;
using fdivlib::SignPattern;
using fdivlib::solve_A;
using fdivlib::solve_A_primitive_convex;
using fdivlib::solve_conopt;
using fdivlib::SolverOptions;
using fdivlib::SolveStatus;

namespace {

ConstraintSpec at_most(const Generator& g, ExtReal bound) {
  return ConstraintSpec{g, bound, false};
}

}  // namespace

TEST_CASE("sign patterns enumerate every nondecreasing sign vector") {
  for (std::size_t m : {0u, 1u, 2u, 3u}) {
    CAPTURE(m);
    const std::vector<SignPattern> pats = sign_patterns(m);
    CHECK(pats.size() == m + 3);
    for (const auto& pat : pats) {
      REQUIRE(pat.sigma.size() == m + 2);
      for (std::size_t j = 0; j < pat.sigma.size(); ++j) {
        CHECK((pat.sigma[j] == -1 || pat.sigma[j] == 1));
        if (j > 0) CHECK(pat.sigma[j] >= pat.sigma[j - 1]);
      }
    }
  }
  // explicit order for one constraint: all-minus first, then by the
  // number of trailing plus entries
  const std::vector<SignPattern> pats = sign_patterns(1);
  CHECK(pats[0].sigma == std::vector<int>{-1, -1, -1});
  CHECK(pats[1].sigma == std::vector<int>{-1, -1, 1});
  CHECK(pats[2].sigma == std::vector<int>{-1, 1, 1});
  CHECK(pats[3].sigma == std::vector<int>{1, 1, 1});
}

TEST_CASE("unconstrained sign-pattern subproblems reach the exact vertex "
          "values") {
  for (double s : {0.5, 1.0, 2.0}) {
    for (std::size_t m : {0u, 1u}) {
      CAPTURE(s);
      CAPTURE(m);
      for (const auto& pat : sign_patterns(m)) {
        const double got = solve_conopt(pat, s, {}, {});
        const double want = oracle::lp_vertex_conopt(pat.sigma, s);
        CAPTURE(pat.sigma[0]);
        CHECK(std::abs(got - want) <= 5e-3);
      }
    }
  }
}

TEST_CASE("constant patterns collapse to the affine term") {
  // all entries equal: the functional is 1 - s (all plus) or s - 1
  // (all minus) at every feasible pair, so constraints cannot matter
  const Generator hel = make_generator("hellinger");
  const std::vector<ConstraintSpec> cs = {at_most(hel, 0.2)};
  const SignPattern all_plus{{1, 1, 1}};
  const SignPattern all_minus{{-1, -1, -1}};
  for (double s : {0.5, 2.0}) {
    CAPTURE(s);
    CHECK(std::abs(solve_conopt(all_plus, s, cs, {}) - (1.0 - s)) <= 1e-6);
    CHECK(std::abs(solve_conopt(all_minus, s, cs, {}) - (s - 1.0)) <= 1e-6);
  }
}

TEST_CASE("convex decomposition reproduces the variation maximum") {
  // threshold 1 makes the piecewise-linear divergence equal to total
  // variation, whose largest value under a squared-Hellinger cap has a
  // closed form
  const Generator hel = make_generator("hellinger");
  for (double H : {0.2, 0.5}) {
    CAPTURE(H);
    const std::vector<ConstraintSpec> cs = {at_most(hel, H)};
    const BoundResult res = solve_A_primitive_convex(1.0, cs, {});
    REQUIRE(res.status == SolveStatus::optimal_within_tol);
    REQUIRE(res.value.is_finite());
    CHECK(res.n_used == 3);
    const double closed = std::sqrt(2.0 * H) * std::sqrt(1.0 - H / 2.0);
    CHECK(std::abs(res.value.finite_value() - closed) <= 5e-3);
  }
  // unconstrained: the maximum of the kink divergence is min(1, s) = 1
  const BoundResult top = solve_A_primitive_convex(1.0, {}, {});
  REQUIRE(top.value.is_finite());
  CHECK(std::abs(top.value.finite_value() - 1.0) <= 1e-6);
}

TEST_CASE("convex path and lattice path agree off the symmetric point") {
  const Generator hel = make_generator("hellinger");
  const std::vector<ConstraintSpec> cs = {at_most(hel, 0.3)};
  for (double s : {0.6, 1.0, 2.0}) {
    CAPTURE(s);
    const BoundResult via_convex = solve_A_primitive_convex(s, cs, {});
    const BoundResult via_grid =
        solve_A(make_generator("primitive", {s}), cs, {});
    REQUIRE(via_convex.value.is_finite());
    REQUIRE(via_grid.value.is_finite());
    CHECK(std::abs(via_convex.value.finite_value() -
                   via_grid.value.finite_value()) <= 5e-3);
  }
}

TEST_CASE("convex path handles two simultaneous caps") {
  const Generator hel = make_generator("hellinger");
  const Generator kl = make_generator("kl");
  const std::vector<ConstraintSpec> cs = {at_most(hel, 0.1),
                                          at_most(kl, 0.4)};
  const BoundResult res = solve_A_primitive_convex(1.0, cs, {});
  REQUIRE(res.value.is_finite());
  CHECK(res.n_used == 4);
  CHECK(std::abs(res.value.finite_value() - oracle::kImprovementJoint) <=
        1e-3);
}

TEST_CASE("threshold validation") {
  CHECK_THROWS_AS(solve_A_primitive_convex(0.0, {}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_A_primitive_convex(-1.0, {}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      solve_A_primitive_convex(
          1.0, {ConstraintSpec{make_generator("tv"), 0.5, true}}, {}),
      std::invalid_argument);
}

TEST_CASE("the deliberate half-factor corruption doubles the result") {
  const Generator hel = make_generator("hellinger");
  const std::vector<ConstraintSpec> cs = {at_most(hel, 0.3)};
  const BoundResult honest = solve_A_primitive_convex(1.0, cs, {});
  SolverOptions corrupt;
  corrupt.debug_drop_half_factor = true;
  const BoundResult doubled = solve_A_primitive_convex(1.0, cs, corrupt);
  REQUIRE(honest.value.is_finite());
  REQUIRE(doubled.value.is_finite());
  CHECK(doubled.value.finite_value() ==
        doctest::Approx(2.0 * honest.value.finite_value()).epsilon(1e-12));
}

TEST_CASE("joint caps beat the pointwise single-cap minimum on the ridge") {
  const ImprovementResult r = improvement_over_pointwise_min(
      oracle::kImprovementH, oracle::kImprovementK, {});
  CHECK(std::abs(r.single_h - oracle::kImprovementSingleH) <= 1e-3);
  CHECK(std::abs(r.single_k - oracle::kImprovementSingleK) <= 1e-3);
  CHECK(std::abs(r.joint - oracle::kImprovementJoint) <= 1e-3);
  CHECK(std::abs(r.improvement - oracle::kImprovementValue) <= 1e-4);
  CHECK(r.improvement == std::max(0.0, r.raw));
  CHECK(r.improvement > 0.0);
  // the joint bound can never exceed either single bound
  CHECK(r.joint <= std::min(r.single_h, r.single_k) + 2e-3);
}

TEST_CASE("the improvement is largest near the crossing of the single-cap "
          "curves") {
  // frozen from an independent constrained solve: along the crossing
  // curve the peak sits near H = 0.5
  const ImprovementResult peak = improvement_over_pointwise_min(0.5, 2.00664, {});
  CHECK(peak.improvement > 5e-3);
}

TEST_CASE("the improvement vanishes when one cap dominates") {
  // a slack squared-Hellinger cap: the relative-entropy cap alone decides
  const ImprovementResult slack_h = improvement_over_pointwise_min(1.0, 0.4, {});
  CHECK(slack_h.improvement <= 2e-3);
  // a zero cap forces p = q, so every bound is zero
  const ImprovementResult zero = improvement_over_pointwise_min(0.0, 0.4, {});
  CHECK(zero.single_h <= 1e-6);
  CHECK(zero.joint <= 1e-6);
  CHECK(zero.improvement <= 1e-6);
}
