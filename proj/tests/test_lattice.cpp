#include "oracles.hpp"

#include "ergo/lattice.hpp"
#include "ergo/primes.hpp"

#include <doctest.h>

using namespace ergo;

namespace {
IntVector iv(std::initializer_list<std::int64_t> v) {
  IntVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v) out[i++] = x;
  return out;
}
RealVector rv(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("gamma construction") {
  CHECK(build_gamma(1, 3).indices() == std::vector<MultiIndex>{{1}, {2}, {3}});
  const auto g = build_gamma(2, 2);
  CHECK(g.indices() == std::vector<MultiIndex>{{0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}});
  CHECK(build_gamma(2, 1).indices() == std::vector<MultiIndex>{{0, 1}, {1, 0}});
  CHECK(g.max_order() == 2);
  CHECK(g.restricted_to_orders({2}).size() == 3);
  CHECK_THROWS_AS(GammaSet(1, {{0}}), ParameterError);
  CHECK_THROWS_AS(build_gamma(0, 1), ParameterError);
}

TEST_CASE("canonical map") {
  const auto g = build_gamma(2, 2);
  CHECK(canonical_map(iv({0, 0}), g) == IntVector::Zero(5));
  CHECK(canonical_map(iv({1, 1}), g) == IntVector::Ones(5));
  CHECK(canonical_map(iv({2, 3}), g) == iv({3, 9, 2, 6, 4}));
  const auto pm = IntegerPolynomialMap::canonical(g);
  CHECK(pm(iv({2, 3})) == iv({3, 9, 2, 6, 4}));
  CHECK_THROWS_AS(canonical_map(iv({4'000'000'000, 1}), g), OverflowError);
}

TEST_CASE("scale matrix") {
  const GammaSet g(1, {{1}, {2}});
  CHECK(scale_matrix_apply<double>(1.0, rv({0.3, 0.7}), g) == rv({0.3, 0.7}));
  CHECK(scale_matrix_apply<double>(2.0, rv({1, 1}), g) == rv({2, 4}));
  CHECK(scale_matrix_apply<double>(10.0, RealVector::Ones(5), build_gamma(2, 2)) == rv({10, 100, 10, 100, 100}));
}

TEST_CASE("region membership") {
  CHECK(Region::ball(1).contains(2, rv({1.9})));
  CHECK_FALSE(Region::ball(1).contains(2, rv({2.0})));
  CHECK(Region::cube(2, 0.5).contains(3, rv({1.4, -1.4})));
  CHECK_FALSE(Region::cube(2, 0.5).contains(3, rv({1.5, 0})));
  CHECK(Region::ellipsoid(rv({1.0, 0.5})).contains(1, rv({0.0, 0.49})));
  CHECK_THROWS_AS(Region::cube(2, 0.9), ParameterError);
  CHECK(check_region(Region::ball(2), 500, 1).ok());
  CHECK(check_region(Region::ellipsoid(rv({1.0, 0.3})), 500, 2).ok());
}

TEST_CASE("weighted points") {
  const auto z = LatticeConfig::make(1, 0, build_gamma(1, 1));
  const auto pts = enumerate_weighted_points(z, Region::ball(1), 2.5);
  REQUIRE(pts.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(pts[i].point[0] == static_cast<std::int64_t>(i) - 2);
    CHECK(pts[i].weight == 1.0);
  }
  const auto pr = LatticeConfig::make(0, 1, build_gamma(1, 1));
  const auto pp = enumerate_weighted_points(pr, Region::ball(1), 4);
  REQUIRE(pp.size() == 4);
  CHECK(pp[0].point[0] == -3);
  CHECK(pp[0].weight == doctest::Approx(std::log(3.0)));
  CHECK(pp[3].point[0] == 3);
  CHECK(enumerate_weighted_points(pr, Region::ball(1), 1).empty());
}

TEST_CASE("theta omega") {
  const auto z = LatticeConfig::make(1, 0, build_gamma(1, 1));
  CHECK(chebyshev_omega(3.5, z, Region::ball(1)) == 7.0);
  const auto pr = LatticeConfig::make(0, 1, build_gamma(1, 1));
  CHECK(chebyshev_omega(1, pr, Region::ball(1)) == 0.0);
  CHECK(chebyshev_omega(10, pr, Region::ball(1)) == doctest::Approx(2 * std::log(210.0)).epsilon(1e-12));
  CHECK(chebyshev_omega(1000, pr, Region::ball(1)) == doctest::Approx(2 * oracle::theta(999.5)).epsilon(1e-12));
}

TEST_CASE("mixed lattice") {
  // Z x (+-P) inside the disc of radius 6
  const auto cfg = LatticeConfig::make(1, 1, build_gamma(2, 1));
  double expect = 0;
  for (int n = -6; n <= 6; ++n)
    for (int p = -6; p <= 6; ++p)
      if (oracle::is_prime(std::abs(p)) && n * n + p * p < 36) expect += std::log(std::abs(p));
  CHECK(chebyshev_omega(6, cfg, Region::ball(2)) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(LatticeConfig::make(1, 0, build_gamma(2, 1)), ParameterError);
}
