#include "ergo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ergo {

// ---------------------------------------------------------------------------
// GammaSet

GammaSet::GammaSet(int k, std::vector<MultiIndex> indices) : k_(k), indices_(std::move(indices)) {
  if (k < 1) throw ParameterError("Gamma: k must be >= 1");
  for (const auto& g : indices_) {
    if (static_cast<int>(g.size()) != k) throw ParameterError("Gamma: multi-index has wrong length");
    if (std::any_of(g.begin(), g.end(), [](int e) { return e < 0; }))
      throw ParameterError("Gamma: negative exponent");
    if (ergo::order(g) == 0) throw ParameterError("Gamma: the zero multi-index is excluded");
  }
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw ParameterError("Gamma: duplicate multi-index");
  if (indices_.empty()) throw ParameterError("Gamma must be nonempty");
}

Eigen::VectorXi GammaSet::orders() const {
  Eigen::VectorXi out(static_cast<Eigen::Index>(indices_.size()));
  for (std::size_t i = 0; i < indices_.size(); ++i) out[static_cast<Eigen::Index>(i)] = ergo::order(indices_[i]);
  return out;
}

int GammaSet::max_order() const { return orders().maxCoeff(); }

std::ptrdiff_t GammaSet::find(const MultiIndex& gamma) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), gamma);
  if (it == indices_.end() || *it != gamma) return -1;
  return it - indices_.begin();
}

GammaSet GammaSet::restricted_to_orders(const std::vector<int>& keep) const {
  std::vector<MultiIndex> out;
  for (const auto& g : indices_)
    if (std::find(keep.begin(), keep.end(), ergo::order(g)) != keep.end()) out.push_back(g);
  return GammaSet(k_, std::move(out));
}

namespace {

void enumerate_indices(int k, int degree, MultiIndex& current, int position, int remaining,
                       std::vector<MultiIndex>& out, std::size_t max_size) {
  if (position == k) {
    if (order(current) > 0) {
      if (out.size() >= max_size) throw ResourceError("Gamma exceeds configured maximum size");
      out.push_back(current);
    }
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current[static_cast<std::size_t>(position)] = e;
    enumerate_indices(k, degree, current, position + 1, remaining - e, out, max_size);
  }
  current[static_cast<std::size_t>(position)] = 0;
}

}  // namespace

GammaSet build_gamma(int k, int degree, std::size_t max_size) {
  if (k < 1 || degree < 1) throw ParameterError("build_gamma requires k >= 1 and degree >= 1");
  // |Gamma| = C(k + degree, k) - 1, checked before enumerating.
  long double size = 1.0L;
  for (int i = 1; i <= k; ++i) size = size * (degree + i) / i;
  if (size - 1.0L > static_cast<long double>(max_size)) throw ResourceError("Gamma exceeds configured maximum size");
  std::vector<MultiIndex> out;
  MultiIndex current(static_cast<std::size_t>(k), 0);
  enumerate_indices(k, degree, current, 0, degree, out, max_size);
  return GammaSet(k, std::move(out));
}

LatticeConfig LatticeConfig::make(int k_int, int k_prime, GammaSet gamma) {
  if (k_int < 0 || k_prime < 0 || k_int + k_prime < 1)
    throw ParameterError("lattice config requires k', k'' >= 0 with k' + k'' >= 1");
  if (gamma.dimension() != k_int + k_prime) throw ParameterError("Gamma dimension must equal k' + k''");
  return LatticeConfig{k_int + k_prime, k_int, k_prime, std::move(gamma)};
}

// ---------------------------------------------------------------------------
// IntegerPolynomialMap

IntegerPolynomialMap::IntegerPolynomialMap(int k, std::vector<std::vector<Term>> components)
    : k_(k), components_(std::move(components)) {
  if (k < 1) throw ParameterError("polynomial map: k must be >= 1");
  if (components_.empty()) throw ParameterError("polynomial map needs at least one component");
  for (const auto& comp : components_)
    for (const auto& term : comp) {
      if (static_cast<int>(term.exponents.size()) != k) throw ParameterError("polynomial map: bad exponent length");
      if (order(term.exponents) == 0 && term.coefficient != 0)
        throw ParameterError("polynomial map components must vanish at 0");
    }
}

IntegerPolynomialMap IntegerPolynomialMap::canonical(const GammaSet& gamma) {
  std::vector<std::vector<Term>> comps;
  for (const auto& g : gamma.indices()) comps.push_back({Term{1, g}});
  return IntegerPolynomialMap(gamma.dimension(), std::move(comps));
}

int IntegerPolynomialMap::degree() const {
  int d = 0;
  for (const auto& comp : components_)
    for (const auto& term : comp)
      if (term.coefficient != 0) d = std::max(d, order(term.exponents));
  return d;
}

IntVector IntegerPolynomialMap::operator()(const IntVector& x) const {
  if (x.size() != k_) throw ParameterError("polynomial map: argument dimension mismatch");
  IntVector out(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t j = 0; j < components_.size(); ++j) {
    std::int64_t acc = 0;
    for (const auto& term : components_[j]) {
      std::int64_t mono = term.coefficient;
      for (int c = 0; c < k_; ++c)
        mono = checked_mul(mono, detail::power<std::int64_t>(x[c], term.exponents[static_cast<std::size_t>(c)]));
      acc = checked_add(acc, mono);
    }
    out[static_cast<Eigen::Index>(j)] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Region

Region Region::ball(int k) {
  if (k < 1) throw ParameterError("region dimension must be >= 1");
  Region r(Kind::ball, k);
  r.inner_radius_ = 1.0;
  return r;
}

Region Region::cube(int k, double half_side) {
  if (k < 1) throw ParameterError("region dimension must be >= 1");
  if (!(half_side > 0) || half_side * std::sqrt(static_cast<double>(k)) > 1.0 + 1e-15)
    throw ParameterError("cube must satisfy 0 < h and h*sqrt(k) <= 1");
  Region r(Kind::cube, k);
  r.half_side_ = half_side;
  r.inner_radius_ = half_side;
  return r;
}

Region Region::ellipsoid(const RealVector& semi_axes) {
  if (semi_axes.size() < 1) throw ParameterError("ellipsoid needs at least one axis");
  if ((semi_axes.array() <= 0).any() || (semi_axes.array() > 1).any())
    throw ParameterError("ellipsoid semi-axes must lie in (0, 1]");
  Region r(Kind::ellipsoid, static_cast<int>(semi_axes.size()));
  r.semi_axes_ = semi_axes;
  r.inner_radius_ = semi_axes.minCoeff();
  return r;
}

Region Region::custom(int k, std::function<bool(const RealVector&)> contains_unit, double inner_radius) {
  if (k < 1) throw ParameterError("region dimension must be >= 1");
  if (!(inner_radius > 0 && inner_radius < 1)) throw ParameterError("custom region needs c_Omega in (0, 1)");
  if (!contains_unit) throw ParameterError("custom region needs a membership predicate");
  Region r(Kind::custom, k);
  r.predicate_ = std::move(contains_unit);
  r.inner_radius_ = inner_radius;
  return r;
}

bool Region::contains_unit(const RealVector& x) const { return contains(1.0, x); }

bool Region::contains(double t, const RealVector& x) const {
  if (x.size() != k_) throw ParameterError("region membership: dimension mismatch");
  switch (kind_) {
    case Kind::ball:
      return x.squaredNorm() < t * t;
    case Kind::cube:
      return x.cwiseAbs().maxCoeff() < half_side_ * t;
    case Kind::ellipsoid:
      return x.cwiseQuotient(semi_axes_).squaredNorm() < t * t;
    case Kind::custom:
      return predicate_(x / t);
  }
  return false;
}

double Region::radial_extent(const RealVector& u) const {
  switch (kind_) {
    case Kind::ball:
      return 1.0 / u.norm();
    case Kind::cube:
      return half_side_ / u.cwiseAbs().maxCoeff();
    case Kind::ellipsoid:
      return 1.0 / u.cwiseQuotient(semi_axes_).norm();
    case Kind::custom: {
      // Omega is star-shaped about 0 and lies in B(0, 1).
      double lo = 0.0, hi = 1.0 / u.norm();
      for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        (predicate_(mid * u) ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double Region::unit_volume() const {
  const double pi = std::numbers::pi;
  double ball_volume = std::pow(pi, k_ / 2.0) / std::tgamma(k_ / 2.0 + 1.0);
  switch (kind_) {
    case Kind::ball:
      return ball_volume;
    case Kind::cube:
      return std::pow(2.0 * half_side_, k_);
    case Kind::ellipsoid:
      return ball_volume * semi_axes_.prod();
    case Kind::custom:
      break;
  }
  throw ParameterError("custom regions have no closed-form volume; use region_measure");
}

double Region::boundary_distance(double t, const RealVector& x) const {
  switch (kind_) {
    case Kind::ball:
      return std::abs(x.norm() - t);
    case Kind::cube: {
      double half = half_side_ * t;
      RealVector a = x.cwiseAbs();
      if (a.maxCoeff() < half) return (half - a.array()).minCoeff();
      return (a.array() - half).max(0.0).matrix().norm();
    }
    default:
      throw ParameterError("boundary distance is implemented for balls and cubes only");
  }
}

bool region_contains(const Region& region, double t, const RealVector& x) {
  if (!(t > 0)) throw ParameterError("region_contains requires t > 0");
  return region.contains(t, x);
}

RegionCheck check_region(const Region& region, int samples, std::uint64_t seed) {
  const int k = region.dimension();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto random_direction = [&] {
    RealVector v(k);
    for (int i = 0; i < k; ++i) v[i] = gauss(rng);
    return RealVector(v / v.norm());
  };
  RegionCheck check;
  const double c = region.inner_radius();
  for (int s = 0; s < samples; ++s) {
    RealVector inner = random_direction() * (0.999999 * c * std::pow(unif(rng), 1.0 / k));
    if (!region.contains_unit(inner)) check.inner_ball_ok = false;
    RealVector outer = random_direction() * (1.0 + unif(rng));
    if (region.contains_unit(outer)) check.outer_ball_ok = false;
  }
  std::vector<RealVector> inside;
  for (int s = 0; s < 20 * samples && static_cast<int>(inside.size()) < 2 * samples; ++s) {
    RealVector x(k);
    for (int i = 0; i < k; ++i) x[i] = 2.0 * unif(rng) - 1.0;
    if (region.contains_unit(x)) inside.push_back(x);
  }
  for (std::size_t i = 0; i + 1 < inside.size(); i += 2)
    if (!region.contains_unit(0.5 * (inside[i] + inside[i + 1]))) check.convex_ok = false;
  return check;
}

// ---------------------------------------------------------------------------
// Weighted enumeration

namespace {

struct Enumerator {
  const LatticeConfig& cfg;
  const Region& region;
  double t;
  const PointVisitor& visit;
  std::vector<std::vector<std::int64_t>> candidates;  // per coordinate, ascending
  std::vector<double> logs;                            // log|p| per signed prime value
  IntVector point;

  void run(int coordinate, double weight) {
    if (coordinate == cfg.k) {
      if (region.contains(t, point.cast<double>())) visit(point, weight);
      return;
    }
    const auto& values = candidates[static_cast<std::size_t>(coordinate)];
    const bool prime_axis = coordinate >= cfg.k_int;
    for (std::size_t i = 0; i < values.size(); ++i) {
      point[coordinate] = values[i];
      double w = prime_axis ? weight * logs[i] : weight;
      run(coordinate + 1, w);
    }
  }
};

}  // namespace

void for_each_weighted_point(const LatticeConfig& cfg, const Region& region, double t, const PointVisitor& visit,
                             const PrimeTable* table) {
  if (!(t > 0)) throw ParameterError("lattice enumeration requires t > 0");
  if (region.dimension() != cfg.k) throw ParameterError("region dimension must equal k");
  Enumerator e{cfg, region, t, visit, {}, {}, IntVector::Zero(cfg.k)};

  PrimeTable local;
  const auto reach = static_cast<std::uint64_t>(std::ceil(t));
  if (cfg.k_prime > 0 && (table == nullptr || table->limit < reach)) {
    local = reach >= 2 ? sieve_primes(reach) : PrimeTable{1, {}};
    table = &local;
  }
  std::vector<std::int64_t> signed_primes;
  if (cfg.k_prime > 0) {
    for (auto it = table->primes.rbegin(); it != table->primes.rend(); ++it)
      if (static_cast<double>(*it) < t) {
        signed_primes.push_back(-static_cast<std::int64_t>(*it));
      }
    for (std::uint64_t p : table->primes) {
      if (static_cast<double>(p) >= t) break;
      signed_primes.push_back(static_cast<std::int64_t>(p));
    }
    for (std::int64_t p : signed_primes) e.logs.push_back(std::log(static_cast<double>(std::abs(p))));
  }
  for (int c = 0; c < cfg.k; ++c) {
    if (c >= cfg.k_int) {
      e.candidates.push_back(signed_primes);
      continue;
    }
    RealVector axis = RealVector::Zero(cfg.k);
    axis[c] = 1.0;
    double extent = region.kind() == Region::Kind::custom ? 1.0 : region.radial_extent(axis);
    auto bound = static_cast<std::int64_t>(std::ceil(extent * t));
    std::vector<std::int64_t> values;
    for (std::int64_t n = -bound; n <= bound; ++n) values.push_back(n);
    e.candidates.push_back(std::move(values));
  }
  e.run(0, 1.0);
}

std::vector<WeightedPoint> enumerate_weighted_points(const LatticeConfig& cfg, const Region& region, double t,
                                                     const PrimeTable* table) {
  std::vector<WeightedPoint> out;
  for_each_weighted_point(
      cfg, region, t, [&](const IntVector& x, double w) { out.push_back({x, w}); }, table);
  return out;
}

double chebyshev_omega(double t, const LatticeConfig& cfg, const Region& region, const PrimeTable* table) {
  CompensatedSum sum;
  for_each_weighted_point(
      cfg, region, t, [&](const IntVector&, double w) { sum.add(w); }, table);
  return static_cast<double>(sum.value());
}

std::int64_t boundary_layer_count(const Region& region, double big_n, double q) {
  const int k = region.dimension();
  auto bound = static_cast<std::int64_t>(std::ceil(big_n + q));
  std::int64_t count = 0;
  IntVector x = IntVector::Constant(k, -bound);
  while (true) {
    if (region.boundary_distance(big_n, x.cast<double>()) < q) ++count;
    int c = 0;
    while (c < k && x[c] == bound) x[c++] = -bound;
    if (c == k) break;
    ++x[c];
  }
  return count;
}

}  // namespace ergo
