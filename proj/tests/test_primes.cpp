#include "oracles.hpp"

#include "ergo/primes.hpp"

#include <doctest.h>

using namespace ergo;

TEST_CASE("sieve small limits") {
  CHECK(sieve_primes(1).primes.empty());
  CHECK(sieve_primes(10).primes == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(sieve_primes(2).primes == std::vector<std::uint64_t>{2});
}

TEST_CASE("sieve agrees with trial division") {
  const auto table = sieve_primes(1'000'000);
  std::size_t count = 0;
  for (std::int64_t n = 2; n <= 1'000'000; ++n) count += oracle::is_prime(n);
  CHECK(table.primes.size() == count);
  CHECK(count == 78498);
  CHECK(table.count_up_to(100) == 25);
  CHECK(table.contains(999983));
  CHECK_FALSE(table.contains(999981));
}

TEST_CASE("sieve segment boundaries") {
  // tiny segments force many boundary crossings
  SieveOptions opt;
  opt.segment_bytes = 64;
  const auto a = sieve_primes(20000, opt), b = sieve_primes(20000);
  CHECK(a.primes == b.primes);
}

TEST_CASE("sieve memory cap") {
  SieveOptions opt;
  opt.memory_cap_bytes = 1024;
  CHECK_THROWS_AS(sieve_primes(10'000'000, opt), ResourceError);
}

TEST_CASE("totient and mobius") {
  CHECK(euler_totient(1) == 1);
  CHECK(euler_totient(7) == 6);
  CHECK(euler_totient(12) == 4);
  for (std::int64_t q = 1; q <= 500; ++q) {
    CHECK(euler_totient(q) == oracle::phi(q));
    CHECK(mobius(q) == oracle::mobius(q));
  }
  CHECK_THROWS_AS(euler_totient(0), ParameterError);
}

TEST_CASE("units mod q") {
  CHECK(units_mod(1) == std::vector<std::int64_t>{1});
  CHECK(units_mod(6) == std::vector<std::int64_t>{1, 5});
  CHECK(units_mod(12) == std::vector<std::int64_t>{1, 5, 7, 11});
  CHECK(prime_divisors(360) == std::vector<std::int64_t>{2, 3, 5});
}

TEST_CASE("chebyshev theta") {
  CHECK(chebyshev_theta(1, ResidueClass(1, 1)) == 0.0);
  CHECK(chebyshev_theta(10, ResidueClass(1, 1)) == doctest::Approx(std::log(210.0)).epsilon(1e-12));
  CHECK(chebyshev_theta(10, ResidueClass(4, 1)) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  const auto table = sieve_primes(20000);
  for (std::int64_t q : {1, 3, 4, 7, 10})
    for (std::int64_t r : units_mod(q))
      CHECK(chebyshev_theta(20000, ResidueClass(q, r), table) ==
            doctest::Approx(oracle::theta(20000, q, r)).epsilon(1e-12));
}

TEST_CASE("siegel walfisz error") {
  CHECK(siegel_walfisz_error(1, ResidueClass(1, 1)) == doctest::Approx(1.0));
  CHECK(siegel_walfisz_error(10, ResidueClass(1, 1)) == doctest::Approx(10 - std::log(210.0)).epsilon(1e-12));
  CHECK(siegel_walfisz_error(1e6, ResidueClass(1, 1)) / 1e6 <= 0.01);
  CHECK_THROWS_AS(siegel_walfisz_error(100, ResidueClass(4, 2)), InvalidClassError);
}

TEST_CASE("residue class validation") {
  CHECK_THROWS_AS(ResidueClass(0, 1), ParameterError);
  CHECK(ResidueClass(5, 5).contains(10));
  CHECK_FALSE(ResidueClass(4, 2).coprime());
}
