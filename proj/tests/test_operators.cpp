#include "ergo/operators.hpp"

#include <doctest.h>

using namespace ergo;

namespace {
IntVector at(std::int64_t x) { return IntVector::Constant(1, x); }
const LatticeConfig z1 = LatticeConfig::make(1, 0, build_gamma(1, 1));
const LatticeConfig p1 = LatticeConfig::make(0, 1, build_gamma(1, 1));
}  // namespace

TEST_CASE("average of a delta") {
  const auto out = average_A(Signal::delta(1), 2.5, z1, Region::ball(1));
  CHECK(out.size() == 5);
  for (int n = -2; n <= 2; ++n) CHECK(out.value(at(n)).real() == doctest::Approx(0.2));
  const auto pr = average_A(Signal::delta(1), 4, p1, Region::ball(1));
  const double theta = 2 * std::log(6.0);
  CHECK(theta == doctest::Approx(3.58352).epsilon(1e-5));
  CHECK(pr.value(at(2)).real() == doctest::Approx(std::log(2.0) / theta));
  CHECK(pr.value(at(-3)).real() == doctest::Approx(std::log(3.0) / theta));
  CHECK(pr.value(at(1)) == Complex(0));
  CHECK_THROWS_AS(average_A(Signal::delta(1), 1, p1, Region::ball(1)), EmptyAverageError);
}

TEST_CASE("average preserves mass") {
  std::mt19937_64 rng(5);
  const auto f = random_signal(2, 8, 10, 1, rng);
  const auto cfg = LatticeConfig::make(1, 0, build_gamma(1, 2));
  const auto g = average_A(f, 6.3, cfg, Region::ball(1));
  Complex sf = 0, sg = 0;
  for (const auto& [x, v] : f) sf += v;
  for (const auto& [x, v] : g) sg += v;
  CHECK(std::abs(sf - sg) <= 1e-12);
}

TEST_CASE("cotlar of a delta") {
  const CZKernel inv(1, [](const RealVector& x) { return 1.0 / x[0]; });
  const auto out = cotlar_H(Signal::delta(1), 3.5, inv, z1, Region::ball(1));
  CHECK(out.size() == 6);
  for (int n : {-3, -2, -1, 1, 2, 3}) CHECK(out.value(at(n)).real() == doctest::Approx(1.0 / n));
  CHECK(out.value(at(0)) == Complex(0));
  CHECK(cotlar_H(Signal::delta(1), 0.9, inv, z1, Region::ball(1)).empty());
}

TEST_CASE("twisted average") {
  const auto f = Signal::delta(1);
  const auto plain = average_A(f, 2.5, z1, Region::ball(1));
  CHECK(Signal::max_difference(twisted_average(f, 2.5, RealPolynomial(1), z1, Region::ball(1)), plain) == 0.0);
  const RealPolynomial half(1, {{0.5, {1}}});
  const auto tw = twisted_average(f, 2.5, half, z1, Region::ball(1));
  for (int n = -2; n <= 2; ++n) {
    CHECK(tw.value(at(n)).real() == doctest::Approx(n % 2 ? -0.2 : 0.2));
    CHECK(std::abs(tw.value(at(n)).imag()) <= 1e-15);
  }
}

TEST_CASE("riesz kernels") {
  const auto h = CZKernel::riesz(1, 0);
  CHECK(h(RealVector::Constant(1, 2.0)) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK_THROWS_AS(h(RealVector::Zero(1)), DomainError);
  const auto r = CZKernel::riesz(2, 1);
  RealVector x(2);
  x << 3, 4;
  // Gamma(3/2)/pi^{3/2} * 4 / 125
  CHECK(r(x) == doctest::Approx(0.5 / std::numbers::pi * 4.0 / 125.0));
  CHECK_THROWS_AS(CZKernel::riesz(2, 2), ParameterError);
}

TEST_CASE("kernel validation") {
  for (auto [k, j] : {std::pair{1, 0}, {2, 0}, {2, 1}}) {
    const auto rep = validate_kernel(CZKernel::riesz(k, j), Region::ball(k), 1000, 3);
    CHECK(rep.pass());
    CHECK(rep.annuli.size() == 4);
    CHECK(rep.cancellation_max <= 1e-6);
  }
  // even kernel has no cancellation
  const CZKernel bad(1, [](const RealVector& x) { return 1.0 / std::abs(x[0]); });
  CHECK_FALSE(validate_kernel(bad, Region::ball(1), 200, 1).cancellation_ok);
}

TEST_CASE("stencil convention") {
  Stencil s;
  s.dimension = 1;
  s.taps = {{at(2), Complex(3)}};
  const auto g = apply_stencil(s, Signal::delta(1));
  CHECK(g.value(at(2)) == Complex(3));
}

TEST_CASE("prime stencil and polynomial map") {
  // shifts P(n) = n^2 for n in (-3, 3)
  const auto cfg = LatticeConfig::make(1, 0, GammaSet(1, {{2}}));
  const auto s = average_stencil(3, cfg, Region::ball(1), IntegerPolynomialMap::canonical(cfg.gamma));
  CHECK(s.normalizer == 5.0);
  REQUIRE(s.taps.size() == 3);
  CHECK(s.taps[0].first[0] == 0);
  CHECK(s.taps[0].second.real() == doctest::Approx(0.2));
  CHECK(s.taps[2].first[0] == 4);
  CHECK(s.taps[2].second.real() == doctest::Approx(0.4));
}
