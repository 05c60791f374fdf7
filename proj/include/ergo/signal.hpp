#pragma once

#include "ergo/core.hpp"

#include <iosfwd>
#include <map>
#include <random>

namespace ergo {

/// Finitely supported complex function on Z^d. Zero values are never stored
/// after prune(); iteration is in lexicographic order of the support.
class Signal {
 public:
  using Storage = std::map<IntVector, Complex, LexLess>;

  Signal() = default;
  explicit Signal(int dimension) : dim_(dimension) {
    if (dimension < 1) throw ParameterError("signal dimension must be >= 1");
  }

  static Signal delta(int dimension);
  static Signal delta(const IntVector& at);

  int dimension() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  void add(const IntVector& x, Complex v);
  void set(const IntVector& x, Complex v);
  Complex value(const IntVector& x) const;
  /// Drops entries with |v| <= tolerance.
  Signal& prune(double tolerance = 0.0);

  /// l^p norm for p in [1, inf); pass p = infinity for the sup norm.
  double norm(double p) const;
  /// g(x) = f(x - v).
  Signal translated(const IntVector& v) const;
  Signal abs() const;
  Signal conjugate() const;

  Signal& operator+=(const Signal& other);
  Signal& operator*=(Complex scale);
  friend Signal operator+(Signal a, const Signal& b) { return a += b; }
  friend Signal operator*(Complex c, Signal a) { return a *= c; }
  friend Signal operator-(Signal a, const Signal& b) { return a += Complex(-1.0) * b; }

  /// Componentwise min and max of the support; requires a nonempty signal.
  std::pair<IntVector, IntVector> bounding_box() const;
  /// max_x |f(x) - g(x)| over the union of supports.
  static double max_difference(const Signal& f, const Signal& g);

  Storage::const_iterator begin() const { return values_.begin(); }
  Storage::const_iterator end() const { return values_.end(); }

 private:
  void check(const IntVector& x) const;
  int dim_ = 0;
  Storage values_;
};

/// Random sparse signal: `count` distinct points drawn uniformly from
/// [-radius, radius]^d, complex Gaussian values, normalized in l^p.
Signal random_signal(int dimension, int count, std::int64_t radius, double p, std::mt19937_64& rng);

/// Text format: one support point per line, integer coordinates followed by
/// real and imaginary parts; '#' lines and blank lines are skipped.
Signal read_signal(std::istream& in, int dimension);
Signal read_signal_file(const std::string& path, int dimension);
void write_signal(std::ostream& out, const Signal& f);

}  // namespace ergo
