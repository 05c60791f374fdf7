#include "oracles.hpp"

#include "ergo/circle.hpp"

#include <doctest.h>

using namespace ergo;

namespace {
const GammaSet g1(1, {{1}});
const GammaSet g12(1, {{1}, {2}});

ParameterPlan plan_for(const GammaSet& g, double tau = 0.49) {
  return ParameterPlan::make(2, 3, tau, 0.05, 2.5 / tau, 0.4, 1, ParameterPlan::default_delta(g), g);
}
}  // namespace

TEST_CASE("iw family") {
  CHECK(build_P_leq(1) == std::vector<std::int64_t>{1});
  CHECK(build_P_leq(4) == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(lcm_of(build_P_leq(4)) == 12);
  CHECK(lcm_of(build_P_leq(10)) == 2520);
  for (int n = 1; n <= 60; ++n) {
    CHECK(lcm_of(build_P_leq(n)) == oracle::lcm_upto(n));
    CHECK(lcm_of(build_P_leq(n)) <= oracle::pow3(n));
  }
  CHECK(power_of_three(4) == 81);
  CHECK_THROWS_AS(power_of_three(81), OverflowError);
  CHECK(to_decimal(lcm_of(build_P_leq(60))) == "9690712164777231700912800");
}

TEST_CASE("fraction sets") {
  const auto one = fractions_leq(1, g1);
  REQUIRE(one.size() == 1);
  CHECK(one.members[0].q == 1);
  CHECK(fractions_leq(2, g1).size() == 2);
  CHECK(fractions_leq(2, g12).size() == 4);
  // sum over q <= N of Jordan's J_2(q)
  std::size_t expect = 0;
  for (std::int64_t q = 1; q <= 12; ++q)
    for (std::int64_t a = 1; a <= q; ++a)
      for (std::int64_t b = 1; b <= q; ++b) expect += std::gcd(std::gcd(a, b), q) == 1;
  CHECK(fractions_leq(12, g12).size() == expect);
  CHECK_THROWS_AS(fractions_leq(200, g12, 100), ResourceError);
}

TEST_CASE("annulus sets") {
  for (int u : {1, 2}) {
    const std::int64_t base = std::int64_t{1} << u;
    const auto a = fractions_annulus(base, u, g12), b = fractions_leq(base, g12);
    CHECK(a.members == b.members);
  }
  const auto s8 = fractions_annulus(8, 1, g1);
  for (const auto& f : s8.members) CHECK((f.q > 4 && f.q <= 8));
  CHECK(s8.size() == 4 + 2 + 6 + 4);
  CHECK(s8.contains(ReducedFraction::make(IntVector::Constant(1, 3), 7)));
  CHECK_THROWS_AS(fractions_annulus(6, 1, g1), ParameterError);
  CHECK(is_annulus_level(16, 2));
  CHECK_FALSE(is_annulus_level(8, 2));
  CHECK(annulus_floor(9.5, 1) == 8);
  CHECK(annulus_floor(20, 2) == 16);
  CHECK_FALSE(annulus_floor(1.5, 1).has_value());
}

TEST_CASE("bump profile") {
  const double w = 1.0 / 32, z = 1.0 / 16;
  CHECK(bump_eta(RealVector::Zero(2)) == 1.0);
  CHECK(bump_eta(RealVector::Constant(2, 1.0 / 16)) == 0.0);
  CHECK(bump_eta(RealVector::Constant(2, w / 2)) == 1.0);
  RealVector x = RealVector::Zero(1);
  double prev = 1.0;
  for (int i = 1; i < 20; ++i) {
    x[0] = w + (z - w) * i / 20.0;
    const double v = bump_eta(x);
    CHECK(v > 0);
    CHECK(v < 1);
    CHECK(v < prev);
    prev = v;
  }
  x[0] = 1.0 / 8;
  CHECK(bump_eta(x) == 0.0);
  CHECK(bump_eta_scaled(5, 0.05, RealVector::Zero(2), g12) == 1.0);
  CHECK(bump_eta_scaled(5, 0.05, RealVector::Zero(2), g12, BumpVariant::tilde) == 1.0);
}

TEST_CASE("bump support radius") {
  const double n = 6, chi = 0.05;
  for (int order : {1, 2}) {
    const double r = bump_support_radius(n, chi, order, 2);
    RealVector xi = RealVector::Zero(2);
    xi[order - 1] = 0.9 * r;
    CHECK(bump_eta_scaled(n, chi, xi, g12) > 0);
    xi[order - 1] = 1.001 * r;
    CHECK(bump_eta_scaled(n, chi, xi, g12) == 0);
    CHECK(bump_support_radius(n, chi, order, 2, BumpVariant::tilde) == doctest::Approx(2 * r));
  }
}

TEST_CASE("scale sequence") {
  CHECK(scale_sequence(5, 1) == 32);
  CHECK(scale_sequence(4, 0.5) == 4);
  CHECK(scale_sequence(2, 0.5) == 2);
  CHECK(scale_sequence(0, 0.5) == 1);
  CHECK_THROWS_AS(scale_sequence(10000, 1), ResourceError);
}

TEST_CASE("plan validation") {
  const auto plan = plan_for(g12);
  CHECK(plan.varrho == doctest::Approx(std::min(0.05 / 10, plan.delta / (8 * 0.49))));
  CHECK(plan.kappa(64) == 1.0);
  CHECK(plan.large_scale_start(8) == static_cast<std::int64_t>(std::ceil(std::exp2(1 / 0.49))));
  CHECK(plan.J_s(4) == 0);
  CHECK_THROWS_AS(ParameterPlan::make(2, 3, 0.5, 0.05, 5, 0.4, 1, 0.25, g12), ParameterError);
  CHECK_THROWS_AS(ParameterPlan::make(2, 3, 0.4, 0.2, 5, 0.4, 1, 0.25, g12), ParameterError);
  CHECK_THROWS_AS(ParameterPlan::make(2, 3, 0.4, 0.05, 5, 0.4, 0, 0.25, g12), ParameterError);
  // u must exceed |Gamma| beta
  CHECK_THROWS_AS(ParameterPlan::make(2, 3, 0.4, 0.05, 5, 0.6, 1, 0.25, g12), ParameterError);
  CHECK(ParameterPlan::default_delta(GammaSet(1, {{2}})) == 0.5);
  CHECK(ParameterPlan::default_delta(g12) == 0.25);
}

TEST_CASE("annuli functions at fractions") {
  const auto plan = plan_for(g1);
  const auto third = Frequency::from_fraction(ReducedFraction::make(IntVector::Constant(1, 1), 3));
  CHECK(annulus_levels_upto(20, plan) == std::vector<std::int64_t>{2, 4});
  CHECK(annuli_multiplier(20, 4, plan, g1, third) == doctest::Approx(1.0));
  CHECK(annuli_multiplier(20, 2, plan, g1, third) == 0.0);
  CHECK(annuli_multiplier_leq(20, plan, g1, third) == doctest::Approx(1.0));
  const auto far = Frequency::real(RealVector::Constant(1, 0.29));
  CHECK(annuli_multiplier_leq(20, plan, g1, far) == 0.0);
  const auto d = bump_disjointness(20, plan, g1);
  CHECK(d.disjoint());
  CHECK(d.arithmetic_holds);
}

TEST_CASE("telescoping on a few frequencies") {
  const auto plan = plan_for(g12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 50; ++i) {
    RealVector x(2);
    x << u(rng), u(rng);
    const auto xi = Frequency::real(x);
    for (std::int64_t j : {5, 12, 20}) {
      double sum = 0;
      for (auto s : annulus_levels_upto(j, plan)) sum += annuli_multiplier(j, s, plan, g12, xi);
      CHECK(std::abs(sum - annuli_multiplier_leq(j, plan, g12, xi)) <= 1e-12);
    }
  }
}

TEST_CASE("composite multipliers") {
  const auto cfg = LatticeConfig::make(1, 0, g1);
  const auto plan = plan_for(g1);
  const auto region = Region::ball(1);
  const CompositeContext ctx{plan, cfg, region};
  // 1/2 sits outside every box around Sigma_4 = {1/4, 1/3, 2/3, 3/4}, tilde boxes included
  const auto far = Frequency::real(RealVector::Constant(1, 0.5));
  for (auto v : {CompositeVariant::v, CompositeVariant::Lambda, CompositeVariant::w, CompositeVariant::Pi})
    CHECK(std::abs(composite_multiplier(v, 10, 4, ctx, far)) == 0.0);
  const auto third = Frequency::from_fraction(ReducedFraction::make(IntVector::Constant(1, 1), 3));
  CHECK(std::abs(composite_multiplier(CompositeVariant::Pi, 1, 4, ctx, third) - 1.0) <= 1e-12);
  // w^s carries G(1/3), a full character sum on Z
  CHECK(std::abs(composite_multiplier(CompositeVariant::w, 1, 4, ctx, third)) <= 1e-12);
  // Delta below the first large scale is an empty telescoping sum
  CHECK(composite_multiplier(CompositeVariant::Delta, 1, 2, ctx, far) == Complex(0));
  const std::int64_t start = plan.large_scale_start(2);
  const auto small = Frequency::real(RealVector::Constant(1, 0.002));
  Complex telescoped = 0;
  for (std::int64_t n = start; n <= start + 3; ++n)
    telescoped += continuous_multiplier(small.value(), double(scale_sequence(n, plan.tau)), ContinuousMode::phi, g1, region) -
                  continuous_multiplier(small.value(), double(scale_sequence(n - 1, plan.tau)), ContinuousMode::phi, g1,
                                        region);
  CHECK(std::abs(composite_multiplier(CompositeVariant::Delta, start + 3, 2, ctx, small) - telescoped) <= 1e-10);
  CHECK_THROWS_AS(composite_multiplier(CompositeVariant::Delta, 5, 6, ctx, far), ParameterError);
}

TEST_CASE("support radius report") {
  const auto plan = plan_for(g1);
  const auto r = support_radius_check(plan, 2, g1);
  CHECK(r.q_s == "2");
  CHECK(r.lcm_bound_ok);
  CHECK(r.divides_full_lcm);
  CHECK(r.kappa == 1.0);
  // kappa = 1 gives 2^{-2 + 2^chi} > 1/8 for every admissible chi
  CHECK_FALSE(r.separation_holds);
  const auto r8 = support_radius_check(plan, 8, g1);
  CHECK(r8.q_s == "840");
}
