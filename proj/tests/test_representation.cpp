#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "divergence.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "generator.hpp"
#include "oracles.hpp"
#include "pair.hpp"
#include "psi.hpp"
#include "representation.hpp"

using fdivlib::DiscretePair;
using fdivlib::divergence;
using fdivlib::Generator;
using fdivlib::integral_representation;
using fdivlib::make_generator;
using fdivlib::psi;
using fdivlib::PsiCurve;

namespace {

constexpr double kQuadTol = 1e-9;

DiscretePair make_pair(std::vector<double> p, std::vector<double> q) {
  DiscretePair pair(std::move(p), std::move(q));
  pair.validate();
  return pair;
}

const std::vector<std::string>& curvature_keys() {
  static const std::vector<std::string> keys = {"kl", "chi2", "hellinger",
                                                "triangular", "capacitory"};
  return keys;
}

}  // namespace

TEST_CASE("identity curve gives zero for every generator") {
  const PsiCurve curve = psi(make_pair({0.3, 0.7}, {0.3, 0.7}));
  for (const auto& key : curvature_keys()) {
    const Generator g = make_generator(key);
    const auto v = integral_representation(g, curve, kQuadTol);
    REQUIRE(v.is_finite());
    CHECK(std::fabs(v.finite_value()) <= 1e-9);
  }
}

TEST_CASE("chi-squared worked example through the integral form") {
  const PsiCurve curve = psi(make_pair({0.6, 0.4}, {0.5, 0.5}));
  const auto v = integral_representation(make_generator("chi2"), curve, kQuadTol);
  REQUIRE(v.is_finite());
  CHECK(v.finite_value() == doctest::Approx(0.04).epsilon(1e-7));
}

TEST_CASE("primitive generators reduce to a single curve evaluation") {
  const DiscretePair pair = make_pair({0.1, 0.5, 0.4}, {0.4, 0.35, 0.25});
  const PsiCurve curve = psi(pair);
  for (double s0 : {0.3, 1.0, 1.9, 6.0}) {
    const Generator g = make_generator("primitive", {s0});
    const auto v = integral_representation(g, curve, kQuadTol);
    REQUIRE(v.is_finite());
    CHECK(v.finite_value() ==
          doctest::Approx(std::min(1.0, s0) - curve.eval(s0)).epsilon(1e-13));
  }
  // the total-variation generator is the unit atom at s = 1
  const auto tv = integral_representation(make_generator("tv"), curve, kQuadTol);
  CHECK(tv.finite_value() == doctest::Approx(1.0 - curve.eval(1.0)));
}

TEST_CASE("representation identity on random interior pairs") {
  oracle::PairSampler sampler(314159);
  std::vector<Generator> gens;
  for (const auto& key : curvature_keys()) gens.push_back(make_generator(key));
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = sampler.simplex(5, 1e-3);
    const auto q = sampler.simplex(5, 1e-3);
    const DiscretePair pair = make_pair(p, q);
    const PsiCurve curve = psi(pair);
    for (const auto& g : gens) {
      CAPTURE(g.name);
      CAPTURE(trial);
      const auto direct = divergence(g, pair);
      const auto integral = integral_representation(g, curve, kQuadTol);
      REQUIRE(direct.is_finite());
      REQUIRE(integral.is_finite());
      CHECK(std::fabs(direct.finite_value() - integral.finite_value()) <=
            1e-6);
    }
  }
}

TEST_CASE("integral form agrees with an independent simpson evaluation") {
  oracle::PairSampler sampler(2718);
  for (const auto& key : curvature_keys()) {
    const Generator g = make_generator(key);
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = sampler.simplex(4, 5e-3);
      const auto q = sampler.simplex(4, 5e-3);
      const DiscretePair pair = make_pair(p, q);
      const auto integral =
          integral_representation(g, psi(pair), kQuadTol);
      const double simpson = oracle::representation_simpson(g, p, q);
      REQUIRE(integral.is_finite());
      CHECK(std::fabs(integral.finite_value() - simpson) <= 5e-6);
    }
  }
}

TEST_CASE("infinite divergence is detected through the tail") {
  // P puts mass where Q has none, so KL(P||Q) = +inf and the tail integral
  // of f''(s) = 1/s diverges.
  const PsiCurve curve = psi(make_pair({0.5, 0.5}, {1.0, 0.0}));
  const auto kl = integral_representation(make_generator("kl"), curve, kQuadTol);
  CHECK(kl.is_infinite());
  // Generators with finite slope at infinity stay finite on the same curve.
  const auto hell =
      integral_representation(make_generator("hellinger"), curve, kQuadTol);
  REQUIRE(hell.is_finite());
  const auto direct = divergence(make_generator("hellinger"),
                                 make_pair({0.5, 0.5}, {1.0, 0.0}));
  CHECK(hell.finite_value() ==
        doctest::Approx(direct.finite_value()).epsilon(1e-7));
}

TEST_CASE("generators without curvature data are rejected") {
  Generator bare;
  bare.name = "opaque";
  bare.key = "opaque";
  bare.eval_fn = [](double x) { return x - 1.0; };
  bare.second_derivative = nullptr;
  bare.atoms.clear();
  const PsiCurve curve = psi(make_pair({0.6, 0.4}, {0.5, 0.5}));
  CHECK_THROWS_AS((void)integral_representation(bare, curve, kQuadTol),
                  fdivlib::unsupported_generator);
}
