#pragma once

#include "ergo/core.hpp"
#include "ergo/primes.hpp"

#include <functional>
#include <memory>
#include <numeric>
#include <type_traits>
#include <vector>

namespace ergo {

/// Exponent vector gamma in N_0^k.
using MultiIndex = std::vector<int>;

inline int order(const MultiIndex& gamma) {
  int s = 0;
  for (int g : gamma) s += g;
  return s;
}

/// Finite set of nonzero multi-indices in lexicographic order. build_gamma
/// produces the full set {0 < |gamma| <= degree}; subsets (for example the
/// single index (2) of a pure quadratic) are built with from_indices or
/// restricted_to_orders.
class GammaSet {
 public:
  GammaSet() = default;
  GammaSet(int k, std::vector<MultiIndex> indices);

  int dimension() const { return k_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  /// |gamma| of the i-th index.
  int order(std::size_t i) const { return std::accumulate(indices_[i].begin(), indices_[i].end(), 0); }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  /// |gamma| for every index, in set order (the diagonal of the matrix A).
  Eigen::VectorXi orders() const;
  int max_order() const;
  std::ptrdiff_t find(const MultiIndex& gamma) const;
  GammaSet restricted_to_orders(const std::vector<int>& keep) const;

  bool operator==(const GammaSet& other) const = default;

 private:
  int k_ = 0;
  std::vector<MultiIndex> indices_;
};

GammaSet build_gamma(int k, int degree, std::size_t max_size = 1'000'000);

/// Dimension split k = k' + k'': the first k' coordinates run over Z, the
/// remaining k'' over the signed primes.
struct LatticeConfig {
  int k = 1;
  int k_int = 1;
  int k_prime = 0;
  GammaSet gamma;

  static LatticeConfig make(int k_int, int k_prime, GammaSet gamma);
};

namespace detail {

template <typename Scalar>
Scalar power(Scalar base, int exponent) {
  Scalar out{1};
  for (int i = 0; i < exponent; ++i) {
    if constexpr (std::is_integral_v<Scalar>)
      out = static_cast<Scalar>(checked_mul(out, base));
    else
      out *= base;
  }
  return out;
}

}  // namespace detail

/// Q(x) = (x^gamma : gamma in Gamma). Integer scalars are evaluated exactly
/// and throw OverflowError on overflow.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> canonical_map(const Eigen::MatrixBase<Derived>& x,
                                                                          const GammaSet& gamma) {
  using Scalar = typename Derived::Scalar;
  if (x.size() != gamma.dimension()) throw ParameterError("canonical_map: dimension mismatch");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(static_cast<Eigen::Index>(gamma.size()));
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    Scalar value{1};
    for (Eigen::Index c = 0; c < x.size(); ++c) {
      Scalar factor = detail::power<Scalar>(x[c], gamma[i][static_cast<std::size_t>(c)]);
      if constexpr (std::is_integral_v<Scalar>)
        value = static_cast<Scalar>(checked_mul(value, factor));
      else
        value *= factor;
    }
    out[static_cast<Eigen::Index>(i)] = value;
  }
  return out;
}

/// t^A xi: component gamma scaled by t^{|gamma|}.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> scale_matrix_apply(Scalar t, const Eigen::MatrixBase<Derived>& xi,
                                                            const GammaSet& gamma) {
  if (static_cast<std::size_t>(xi.size()) != gamma.size())
    throw ParameterError("scale_matrix_apply: dimension mismatch");
  if (!(t > Scalar{0})) throw ParameterError("scale_matrix_apply requires t > 0");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    Scalar scale = detail::power<Scalar>(t, order(gamma[static_cast<std::size_t>(i)]));
    if constexpr (std::is_integral_v<Scalar>)
      out[i] = static_cast<Scalar>(checked_mul(scale, static_cast<Scalar>(xi[i])));
    else
      out[i] = scale * static_cast<Scalar>(xi[i]);
  }
  return out;
}

/// Integer polynomial mapping P : Z^k -> Z^d with P(0) = 0.
class IntegerPolynomialMap {
 public:
  struct Term {
    std::int64_t coefficient;
    MultiIndex exponents;
  };

  IntegerPolynomialMap(int k, std::vector<std::vector<Term>> components);
  static IntegerPolynomialMap canonical(const GammaSet& gamma);

  int domain_dimension() const { return k_; }
  int dimension() const { return static_cast<int>(components_.size()); }
  int degree() const;
  const std::vector<std::vector<Term>>& components() const { return components_; }

  IntVector operator()(const IntVector& x) const;

 private:
  int k_;
  std::vector<std::vector<Term>> components_;
};

/// Open bounded convex region Omega with B(0, c) inside Omega inside B(0, 1).
class Region {
 public:
  enum class Kind { ball, cube, ellipsoid, custom };

  static Region ball(int k);
  /// Cube (-h, h)^k; requires h * sqrt(k) <= 1.
  static Region cube(int k, double half_side = 0.5);
  static Region ellipsoid(const RealVector& semi_axes);
  /// `contains_unit` decides membership of Omega itself. Convexity is only
  /// spot-checked (see check_region).
  static Region custom(int k, std::function<bool(const RealVector&)> contains_unit, double inner_radius);

  Kind kind() const { return kind_; }
  int dimension() const { return k_; }
  double inner_radius() const { return inner_radius_; }

  bool contains_unit(const RealVector& x) const;
  /// x in Omega_t, i.e. x / t in Omega.
  bool contains(double t, const RealVector& x) const;
  /// sup{ r >= 0 : r u in Omega } for a unit vector u.
  double radial_extent(const RealVector& direction) const;
  /// Lebesgue measure of Omega; closed form except for custom regions.
  double unit_volume() const;
  /// Distance from x to the boundary of Omega_t (ball and cube only).
  double boundary_distance(double t, const RealVector& x) const;
  /// True when Omega = -Omega for the built-in kinds.
  bool symmetric() const { return kind_ != Kind::custom; }

 private:
  Region(Kind kind, int k) : kind_(kind), k_(k) {}
  Kind kind_;
  int k_;
  double inner_radius_ = 1.0;
  double half_side_ = 0.5;
  RealVector semi_axes_;
  std::function<bool(const RealVector&)> predicate_;
};

bool region_contains(const Region& region, double t, const RealVector& x);

struct RegionCheck {
  bool inner_ball_ok = true;
  bool outer_ball_ok = true;
  bool convex_ok = true;
  bool ok() const { return inner_ball_ok && outer_ball_ok && convex_ok; }
};

/// Random spot-check of B(0, c) inside Omega inside B(0, 1) and midpoint convexity.
RegionCheck check_region(const Region& region, int samples, std::uint64_t seed);

struct WeightedPoint {
  IntVector point;  // (n, p) with n in Z^{k'}, p in (+-P)^{k''}
  double weight;    // prod log|p_i|, 1 when k'' = 0
};

using PointVisitor = std::function<void(const IntVector&, double)>;

/// Visits the points of Z^{k'} x (+-P)^{k''} inside Omega_t in lexicographic
/// order of coordinates. Primes are sieved on demand unless a table is given.
void for_each_weighted_point(const LatticeConfig& cfg, const Region& region, double t, const PointVisitor& visit,
                             const PrimeTable* table = nullptr);

std::vector<WeightedPoint> enumerate_weighted_points(const LatticeConfig& cfg, const Region& region, double t,
                                                     const PrimeTable* table = nullptr);

/// theta_Omega(t): total log-weight of the lattice points in Omega_t.
double chebyshev_omega(double t, const LatticeConfig& cfg, const Region& region, const PrimeTable* table = nullptr);

/// Number of points of Z^k within distance q of the boundary of Omega_N.
std::int64_t boundary_layer_count(const Region& region, double big_n, double q);

}  // namespace ergo
