#include "ergo/primes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ergo {

std::size_t PrimeTable::count_up_to(std::uint64_t x) const {
  return static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
}

bool PrimeTable::contains(std::uint64_t n) const {
  return std::binary_search(primes.begin(), primes.end(), n);
}

namespace {

std::vector<std::uint64_t> small_sieve(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace

PrimeTable sieve_primes(std::uint64_t limit, const SieveOptions& options) {
  if (limit < 1) throw ParameterError("sieve limit must be >= 1");
  // Rosser-Schoenfeld: pi(x) < 1.25506 x / ln x for x > 1.
  double projected = limit < 17 ? 7.0 : 1.25506 * static_cast<double>(limit) / std::log(static_cast<double>(limit));
  double bytes = projected * sizeof(std::uint64_t) + static_cast<double>(options.segment_bytes);
  if (bytes > static_cast<double>(options.memory_cap_bytes))
    throw ResourceError("prime table for limit " + std::to_string(limit) + " exceeds memory cap");

  PrimeTable table;
  table.limit = limit;
  table.primes.reserve(static_cast<std::size_t>(projected));
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(limit)));
  while ((root + 1) * (root + 1) <= limit) ++root;
  while (root * root > limit) --root;
  const std::vector<std::uint64_t> base = small_sieve(std::max<std::uint64_t>(root, 1));

  const std::uint64_t segment = std::max<std::size_t>(options.segment_bytes, 64);
  std::vector<char> marks(segment);
  for (std::uint64_t low = 2; low <= limit; low += segment) {
    std::uint64_t high = std::min(low + segment - 1, limit);
    std::fill(marks.begin(), marks.end(), 0);
    for (std::uint64_t p : base) {
      if (p * p > high) break;
      std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
      for (std::uint64_t m = start; m <= high; m += p) marks[m - low] = 1;
    }
    for (std::uint64_t n = low; n <= high; ++n)
      if (!marks[n - low]) table.primes.push_back(n);
  }
  return table;
}

bool is_prime_trial_division(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::int64_t> prime_divisors(std::int64_t q) {
  if (q < 1) throw ParameterError("modulus must be >= 1");
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= q; ++d) {
    if (q % d) continue;
    out.push_back(d);
    while (q % d == 0) q /= d;
  }
  if (q > 1) out.push_back(q);
  return out;
}

std::int64_t euler_totient(std::int64_t q) {
  std::int64_t phi = q;
  for (std::int64_t p : prime_divisors(q)) phi = phi / p * (p - 1);
  return phi;
}

std::int64_t mobius(std::int64_t q) {
  std::int64_t sign = 1;
  for (std::int64_t p : prime_divisors(q)) {
    if ((q / p) % p == 0) return 0;
    sign = -sign;
  }
  return sign;
}

std::vector<std::int64_t> units_mod(std::int64_t q) {
  if (q < 1) throw ParameterError("modulus must be >= 1");
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a <= q; ++a)
    if (std::gcd(a, q) == 1) out.push_back(a);
  return out;
}

ResidueClass::ResidueClass(std::int64_t modulus, std::int64_t residue) : modulus_(modulus), residue_(residue) {
  if (modulus < 1) throw ParameterError("residue class modulus must be >= 1");
  if (residue < 1 || residue > modulus) throw ParameterError("residue must lie in [1, q]");
}

bool ResidueClass::coprime() const { return std::gcd(residue_, modulus_) == 1; }

double chebyshev_theta(double x, const ResidueClass& cls, const PrimeTable& table) {
  if (x < 0) throw ParameterError("chebyshev_theta requires x >= 0");
  if (x >= 2 && static_cast<double>(table.limit) < std::floor(x))
    throw ParameterError("prime table does not reach x");
  CompensatedSum sum;
  for (std::uint64_t p : table.primes) {
    if (static_cast<double>(p) > x) break;
    if (cls.contains(static_cast<std::int64_t>(p))) sum.add(std::log(static_cast<long double>(p)));
  }
  return static_cast<double>(sum.value());
}

double chebyshev_theta(double x, const ResidueClass& cls) {
  if (x < 2) return 0.0;
  return chebyshev_theta(x, cls, sieve_primes(static_cast<std::uint64_t>(std::floor(x))));
}

double siegel_walfisz_error(double x, const ResidueClass& cls, const PrimeTable& table) {
  if (!cls.coprime()) throw InvalidClassError("Siegel-Walfisz error requires gcd(r, q) = 1");
  if (x < 1) throw ParameterError("siegel_walfisz_error requires x >= 1");
  double main = x / static_cast<double>(euler_totient(cls.modulus()));
  return std::abs(chebyshev_theta(x, cls, table) - main);
}

double siegel_walfisz_error(double x, const ResidueClass& cls) {
  if (!cls.coprime()) throw InvalidClassError("Siegel-Walfisz error requires gcd(r, q) = 1");
  if (x < 2) return siegel_walfisz_error(x, cls, PrimeTable{1, {}});
  return siegel_walfisz_error(x, cls, sieve_primes(static_cast<std::uint64_t>(std::floor(x))));
}

}  // namespace ergo
