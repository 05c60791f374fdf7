#pragma once

#include "ergo/core.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ergo {

/// Ascending list of all primes up to `limit`.
struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;

  std::size_t count_up_to(std::uint64_t x) const;
  bool contains(std::uint64_t n) const;
};

struct SieveOptions {
  /// Upper bound on the bytes held by the output table plus the working segment.
  std::size_t memory_cap_bytes = std::size_t{512} << 20;
  std::size_t segment_bytes = std::size_t{1} << 16;
};

/// Segmented sieve of Eratosthenes. Throws ResourceError when the projected
/// table exceeds the configured memory cap.
PrimeTable sieve_primes(std::uint64_t limit, const SieveOptions& options = {});

bool is_prime_trial_division(std::uint64_t n);

std::int64_t euler_totient(std::int64_t q);
std::int64_t mobius(std::int64_t q);
/// A_q: residues a in [1, q] coprime to q, ascending.
std::vector<std::int64_t> units_mod(std::int64_t q);
/// Distinct prime divisors, ascending.
std::vector<std::int64_t> prime_divisors(std::int64_t q);

/// Congruence class r mod q with 1 <= r <= q.
class ResidueClass {
 public:
  ResidueClass(std::int64_t modulus, std::int64_t residue);
  std::int64_t modulus() const { return modulus_; }
  std::int64_t residue() const { return residue_; }
  bool contains(std::int64_t n) const { return mod_floor(n, modulus_) == residue_ % modulus_; }
  bool coprime() const;

 private:
  std::int64_t modulus_;
  std::int64_t residue_;
};

/// theta(x; q, r) = sum of log p over primes p <= x with p = r (mod q).
double chebyshev_theta(double x, const ResidueClass& cls, const PrimeTable& table);
double chebyshev_theta(double x, const ResidueClass& cls);

/// |theta(x; q, r) - x / phi(q)|; requires gcd(r, q) = 1.
double siegel_walfisz_error(double x, const ResidueClass& cls, const PrimeTable& table);
double siegel_walfisz_error(double x, const ResidueClass& cls);

}  // namespace ergo
