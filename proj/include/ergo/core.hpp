#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergo {

using Complex = std::complex<double>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

// Error taxonomy. The CLI maps ResourceError to exit code 2 and every other
// ergo::Error to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct ResourceError : Error {
  using Error::Error;
};
struct OverflowError : Error {
  using Error::Error;
};
struct EmptyAverageError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct InvalidClassError : Error {
  using Error::Error;
};
struct PeriodTooSmallError : Error {
  using Error::Error;
};
struct QuadratureError : Error {
  QuadratureError(const std::string& what, double estimate)
      : Error(what), estimate(estimate) {}
  double estimate;
};

/// e(x) = exp(2 pi i x), evaluated after reducing x modulo 1.
inline Complex unit_phase(long double x) {
  long double frac = x - std::floor(x);
  double angle = static_cast<double>(2.0L * std::numbers::pi_v<long double> * frac);
  return {std::cos(angle), std::sin(angle)};
}

/// Representative of x mod 1 in [-1/2, 1/2).
inline double torus_reduce(double x) {
  double r = x - std::floor(x + 0.5);
  return r >= 0.5 ? r - 1.0 : r;
}

template <typename Derived>
RealVector torus_reduce(const Eigen::MatrixBase<Derived>& x) {
  RealVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = torus_reduce(static_cast<double>(x[i]));
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in exact evaluation");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in exact evaluation");
  return r;
}

/// Nonnegative residue of a modulo m (m > 0).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(mod_floor(a, m)) * mod_floor(b, m)) % m);
}

/// Neumaier-compensated accumulator in extended precision.
class CompensatedSum {
 public:
  void add(long double x) {
    long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + carry_; }

 private:
  long double sum_ = 0.0L;
  long double carry_ = 0.0L;
};

/// Strict lexicographic order on integer vectors; used as the key order of
/// sparse signals so that every iteration is deterministic.
struct LexLess {
  bool operator()(const IntVector& a, const IntVector& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

}  // namespace ergo
