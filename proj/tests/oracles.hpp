#pragma once
// Slow, independent reference implementations. Nothing here calls into the
// library beyond its value types.

#include "ergo/core.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

namespace oracle {

using ergo::Complex;

inline Complex e(double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); }

// every increasing selection of indices with at least two elements, as bitmasks
template <class F>
void for_each_selection(std::size_t n, F&& f) {
  std::vector<std::size_t> idx;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) < 2) continue;
    idx.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) idx.push_back(i);
    f(idx);
  }
}

inline double variation(const std::vector<Complex>& v, double r) {
  double best = 0;
  for_each_selection(v.size(), [&](const std::vector<std::size_t>& idx) {
    double s = 0;
    for (std::size_t i = 1; i < idx.size(); ++i) s += std::pow(std::abs(v[idx[i]] - v[idx[i - 1]]), r);
    best = std::max(best, s);
  });
  return std::pow(best, 1.0 / r);
}

inline std::int64_t jump_count(const std::vector<Complex>& v, double lambda) {
  std::int64_t best = 0;
  for_each_selection(v.size(), [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 1; i < idx.size(); ++i)
      if (std::abs(v[idx[i]] - v[idx[i - 1]]) < lambda) return;
    best = std::max<std::int64_t>(best, static_cast<std::int64_t>(idx.size()) - 1);
  });
  return best;
}

// cells [I_j, I_{j+1}) with f(I_j) read at the last time <= I_j
inline double oscillation(const std::vector<double>& times, const std::vector<Complex>& v,
                          const std::vector<double>& seq) {
  double total = 0;
  for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
    std::ptrdiff_t anchor = -1;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] <= seq[j]) anchor = static_cast<std::ptrdiff_t>(i);
    if (anchor < 0) continue;
    double sup = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] >= seq[j] && times[i] < seq[j + 1]) sup = std::max(sup, std::abs(v[i] - v[anchor]));
    total += sup * sup;
  }
  return std::sqrt(total);
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

inline std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

inline std::int64_t phi(std::int64_t q) {
  std::int64_t c = 0;
  for (std::int64_t a = 1; a <= q; ++a) c += gcd(a, q) == 1;
  return c;
}

inline int mobius(std::int64_t q) {
  int sign = 1;
  for (std::int64_t p = 2; p * p <= q; ++p) {
    if (q % p) continue;
    q /= p;
    if (q % p == 0) return 0;
    sign = -sign;
  }
  return q > 1 ? -sign : sign;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline double theta(double x, std::int64_t q = 1, std::int64_t r = 1) {
  double s = 0;
  for (std::int64_t n = 2; n <= static_cast<std::int64_t>(x); ++n)
    if ((n - r) % q == 0 && is_prime(n)) s += std::log(static_cast<double>(n));
  return s;
}

// q^{-1} sum_{n mod q} e(a n^2 / q)
inline Complex quadratic_gauss(std::int64_t a, std::int64_t q) {
  Complex s = 0;
  for (std::int64_t n = 0; n < q; ++n) s += e(static_cast<double>((a * n % q) * n % q) / static_cast<double>(q));
  return s / static_cast<double>(q);
}

// phi(q)^{-1} sum_{r in A_q} e(a r / q)
inline Complex ramanujan(std::int64_t a, std::int64_t q) {
  Complex s = 0;
  for (std::int64_t r = 1; r <= q; ++r)
    if (gcd(r, q) == 1) s += e(static_cast<double>(a * r % q) / static_cast<double>(q));
  return s / static_cast<double>(phi(q));
}

inline unsigned __int128 lcm_upto(int n) {
  unsigned __int128 l = 1;
  for (int i = 2; i <= n; ++i) {
    unsigned __int128 a = l, b = static_cast<unsigned>(i);
    while (b) {
      auto t = a % b;
      a = b;
      b = t;
    }
    l = l / a * static_cast<unsigned>(i);
  }
  return l;
}

inline unsigned __int128 pow3(int n) {
  unsigned __int128 v = 1;
  for (int i = 0; i < n; ++i) v *= 3;
  return v;
}

}  // namespace oracle
