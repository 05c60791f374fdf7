#include "ergo/expsums.hpp"

#include <numeric>

namespace ergo {

ReducedFraction ReducedFraction::make(const IntVector& a, std::int64_t q) {
  if (q < 1) throw ParameterError("fraction denominator must be >= 1");
  if (a.size() < 1) throw ParameterError("fraction numerator must be nonempty");
  ReducedFraction f{a, q};
  std::int64_t g = q;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    std::int64_t r = mod_floor(a[i], q);
    f.a[i] = r == 0 ? q : r;
    g = std::gcd(g, f.a[i]);
  }
  if (g != 1) throw ParameterError("fraction a/q is not reduced");
  return f;
}

// ---------------------------------------------------------------------------
// Frequency

Frequency Frequency::real(const RealVector& xi) {
  Frequency f;
  f.value_ = torus_reduce(xi);
  return f;
}

Frequency Frequency::rational(const IntVector& numerators, const IntVector& denominators) {
  if (numerators.size() != denominators.size()) throw ParameterError("rational frequency: length mismatch");
  Frequency f;
  f.rational_ = true;
  f.num_.resize(numerators.size());
  f.den_.resize(numerators.size());
  f.value_.resize(numerators.size());
  for (Eigen::Index i = 0; i < numerators.size(); ++i) {
    std::int64_t d = denominators[i];
    if (d < 1) throw ParameterError("rational frequency: denominators must be >= 1");
    std::int64_t r = mod_floor(numerators[i], d);
    if (2 * static_cast<__int128>(r) >= d) r -= d;  // representative in [-1/2, 1/2)
    std::int64_t g = std::gcd(r, d);
    if (g == 0) g = d;
    f.num_[i] = r / g;
    f.den_[i] = d / g;
    f.value_[i] = static_cast<double>(static_cast<long double>(f.num_[i]) / f.den_[i]);
  }
  return f;
}

Frequency Frequency::from_fraction(const ReducedFraction& frac) {
  return rational(frac.a, IntVector::Constant(frac.a.size(), frac.q));
}

Frequency Frequency::zero(std::size_t size) {
  auto n = static_cast<Eigen::Index>(size);
  return rational(IntVector::Zero(n), IntVector::Ones(n));
}

long double Frequency::phase(const IntVector& m) const {
  if (static_cast<std::size_t>(m.size()) != size()) throw ParameterError("phase: dimension mismatch");
  long double total = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (rational_) {
      total += static_cast<long double>(mul_mod(num_[i], m[i], den_[i])) / den_[i];
    } else {
      long double v = static_cast<long double>(value_[i]) * static_cast<long double>(m[i]);
      total += v - std::floor(v);
    }
  }
  return total - std::floor(total);
}

long double Frequency::phase_at(const IntVector& x, const GammaSet& gamma) const {
  if (gamma.size() != size()) throw ParameterError("phase_at: frequency and Gamma differ in size");
  long double total = 0;
  for (std::size_t g = 0; g < gamma.size(); ++g) {
    const auto i = static_cast<Eigen::Index>(g);
    if (rational_) {
      std::int64_t mono = 1 % den_[i];
      for (Eigen::Index c = 0; c < x.size(); ++c)
        for (int e = 0; e < gamma[g][static_cast<std::size_t>(c)]; ++e) mono = mul_mod(mono, x[c], den_[i]);
      total += static_cast<long double>(mul_mod(num_[i], mono, den_[i])) / den_[i];
    } else {
      long double mono = 1;
      for (Eigen::Index c = 0; c < x.size(); ++c)
        for (int e = 0; e < gamma[g][static_cast<std::size_t>(c)]; ++e) mono *= static_cast<long double>(x[c]);
      long double v = static_cast<long double>(value_[i]) * mono;
      total += v - std::floor(v);
    }
  }
  return total - std::floor(total);
}

Frequency Frequency::operator-() const {
  if (rational_) return rational(-num_, den_);
  return real(-value_);
}

Frequency operator+(const Frequency& a, const Frequency& b) {
  if (a.size() != b.size()) throw ParameterError("frequency sum: dimension mismatch");
  if (a.rational_ && b.rational_) {
    try {
      IntVector num(a.num_.size()), den(a.num_.size());
      for (Eigen::Index i = 0; i < num.size(); ++i) {
        std::int64_t g = std::gcd(a.den_[i], b.den_[i]);
        std::int64_t l = checked_mul(a.den_[i] / g, b.den_[i]);
        num[i] = checked_add(checked_mul(a.num_[i], l / a.den_[i]), checked_mul(b.num_[i], l / b.den_[i]));
        den[i] = l;
      }
      return Frequency::rational(num, den);
    } catch (const OverflowError&) {
      // fall through to the floating representative
    }
  }
  return Frequency::real(a.value_ + b.value_);
}

// ---------------------------------------------------------------------------
// Sums

Complex weyl_sum(const Frequency& xi, const WeylWeight& phi, const LatticeConfig& cfg, const Region& outer,
                 const Region* inner, double t, const PrimeTable* table) {
  if (xi.size() != cfg.gamma.size()) throw ParameterError("weyl_sum: frequency must be indexed by Gamma");
  CompensatedSum re, im;
  RealVector point(cfg.k);
  for_each_weighted_point(
      cfg, outer, t,
      [&](const IntVector& x, double w) {
        if (inner) {
          point = x.cast<double>();
          if (inner->contains(t, point)) return;
        }
        Complex term = unit_phase(xi.phase_at(x, cfg.gamma)) * phi(x, w);
        re.add(term.real());
        im.add(term.imag());
      },
      table);
  return {static_cast<double>(re.value()), static_cast<double>(im.value())};
}

Complex gauss_sum(const ReducedFraction& frac, const LatticeConfig& cfg) {
  const GammaSet& gamma = cfg.gamma;
  if (static_cast<std::size_t>(frac.a.size()) != gamma.size())
    throw ParameterError("gauss_sum: fraction must be indexed by Gamma");
  const std::int64_t q = frac.q;
  std::vector<std::int64_t> integers(static_cast<std::size_t>(q));
  std::iota(integers.begin(), integers.end(), 1);
  const std::vector<std::int64_t> units = units_mod(q);

  // Residue counts are exact integers; the complex sum happens once per residue.
  std::vector<std::int64_t> counts(static_cast<std::size_t>(q), 0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(cfg.k), 0);
  IntVector x(cfg.k);
  auto axis = [&](int c) -> const std::vector<std::int64_t>& { return c < cfg.k_int ? integers : units; };
  while (true) {
    for (int c = 0; c < cfg.k; ++c) x[c] = axis(c)[idx[static_cast<std::size_t>(c)]];
    std::int64_t r = 0;
    for (std::size_t g = 0; g < gamma.size(); ++g) {
      std::int64_t mono = 1 % q;
      for (int c = 0; c < cfg.k; ++c)
        for (int e = 0; e < gamma[g][static_cast<std::size_t>(c)]; ++e) mono = mul_mod(mono, x[c], q);
      r = (r + mul_mod(frac.a[static_cast<Eigen::Index>(g)], mono, q)) % q;
    }
    ++counts[static_cast<std::size_t>(r)];
    int c = 0;
    while (c < cfg.k && ++idx[static_cast<std::size_t>(c)] == axis(c).size()) idx[static_cast<std::size_t>(c++)] = 0;
    if (c == cfg.k) break;
  }
  CompensatedSum re, im;
  for (std::int64_t r = 0; r < q; ++r) {
    if (!counts[static_cast<std::size_t>(r)]) continue;
    Complex e = unit_phase(static_cast<long double>(r) / q);
    re.add(static_cast<long double>(counts[static_cast<std::size_t>(r)]) * e.real());
    im.add(static_cast<long double>(counts[static_cast<std::size_t>(r)]) * e.imag());
  }
  long double norm = std::pow(static_cast<long double>(q), cfg.k_int) *
                     std::pow(static_cast<long double>(units.size()), cfg.k_prime);
  return {static_cast<double>(re.value() / norm), static_cast<double>(im.value() / norm)};
}

// ---------------------------------------------------------------------------
// Multipliers

DiscreteMultiplier DiscreteMultiplier::average(double t, const LatticeConfig& cfg, const Region& region,
                                               const PrimeTable* table) {
  return DiscreteMultiplier(average_stencil(t, cfg, region, IntegerPolynomialMap::canonical(cfg.gamma), table));
}

DiscreteMultiplier DiscreteMultiplier::cotlar(double t, const CZKernel& kernel, const LatticeConfig& cfg,
                                              const Region& region, const PrimeTable* table) {
  return DiscreteMultiplier(
      cotlar_stencil(t, kernel, cfg, region, IntegerPolynomialMap::canonical(cfg.gamma), table));
}

Complex DiscreteMultiplier::operator()(const Frequency& xi) const {
  CompensatedSum re, im;
  for (const auto& [shift, c] : stencil_.taps) {
    Complex term = c * unit_phase(xi.phase(shift));
    re.add(term.real());
    im.add(term.imag());
  }
  return {static_cast<double>(re.value()), static_cast<double>(im.value())};
}

IntVector DiscreteMultiplier::radius() const {
  IntVector r = IntVector::Zero(stencil_.dimension);
  for (const auto& [shift, c] : stencil_.taps) r = r.cwiseMax(shift.cwiseAbs());
  return r;
}

Complex discrete_multiplier(const Frequency& xi, double t, MultiplierMode mode, const LatticeConfig& cfg,
                            const Region& region, const CZKernel* kernel) {
  if (mode == MultiplierMode::cotlar) {
    if (!kernel) throw ParameterError("cotlar multiplier requires a kernel");
    return DiscreteMultiplier::cotlar(t, *kernel, cfg, region)(xi);
  }
  return DiscreteMultiplier::average(t, cfg, region)(xi);
}

namespace {

/// e(x) - 1 without cancellation for small x.
Complex phase_minus_one(double x) {
  double r = torus_reduce(x);
  double s = std::sin(std::numbers::pi * r);
  return Complex(0.0, 2.0 * s) * std::polar(1.0, std::numbers::pi * r);
}

}  // namespace

Complex continuous_multiplier(const RealVector& xi, double t, ContinuousMode mode, const GammaSet& gamma,
                              const Region& region, const CZKernel* kernel, const QuadratureOptions& opt) {
  if (!(t > 0)) throw ParameterError("continuous multiplier requires t > 0");
  if (static_cast<std::size_t>(xi.size()) != gamma.size())
    throw ParameterError("continuous multiplier: frequency must be indexed by Gamma");
  if (region.dimension() != gamma.dimension()) throw ParameterError("region dimension must equal k");
  auto phase = [&](const RealVector& u) { return static_cast<double>(xi.dot(canonical_map(u, gamma))); };

  if (mode == ContinuousMode::phi) {
    auto r = integrate_region([&](const RealVector& u) { return unit_phase(phase(u)); }, region, 0.0, t, opt);
    return r.value / region_measure(region, t);
  }
  if (!kernel) throw ParameterError("Psi_t requires a kernel");
  if (kernel->dimension() != region.dimension()) throw ParameterError("kernel dimension must equal k");
  auto body = integrate_region(
      [&](const RealVector& u) {
        if (u.isZero(0)) return Complex{};
        return phase_minus_one(phase(u)) * (*kernel)(u);
      },
      region, 0.0, t, opt);

  auto truncated = [&](int j) {
    double eps = t * std::ldexp(1.0, -j);
    return integrate_region([&](const RealVector& u) { return Complex((*kernel)(u)); }, region, eps, t, opt).value;
  };
  Complex r4 = truncated(4), r5 = truncated(5), r6 = truncated(6);
  Complex a4 = 2.0 * r5 - r4, a5 = 2.0 * r6 - r5;
  Complex residual = (4.0 * a5 - a4) / 3.0;
  return body.value + residual;
}

bool in_major_arc(const Frequency& xi, const ReducedFraction& frac, double t, double box, const GammaSet& gamma) {
  RealVector d = (xi - Frequency::from_fraction(frac)).value();
  for (std::size_t g = 0; g < gamma.size(); ++g)
    if (std::abs(d[static_cast<Eigen::Index>(g)]) > box * std::pow(t, -order(gamma[g]))) return false;
  return true;
}

double approximation_error(const ReducedFraction& frac, const Frequency& xi, double t, MultiplierMode mode,
                           const LatticeConfig& cfg, const Region& region, const CZKernel* kernel, double box) {
  if (!in_major_arc(xi, frac, t, box, cfg.gamma)) throw ParameterError("frequency lies outside the major-arc box");
  Complex discrete = discrete_multiplier(xi, t, mode, cfg, region, kernel);
  Complex g = gauss_sum(frac, cfg);
  RealVector theta = (xi - Frequency::from_fraction(frac)).value();
  Complex cont = continuous_multiplier(theta, t, counterpart(mode), cfg.gamma, region, kernel);
  return std::abs(discrete - g * cont);
}

double approximation_error_scales(const ReducedFraction& frac, const Frequency& xi, double n_prev, double n_next,
                                  MultiplierMode mode, const LatticeConfig& cfg, const Region& region,
                                  const CZKernel* kernel, double box) {
  if (!(n_prev < n_next)) throw ParameterError("approximation_error_scales requires N' < N");
  if (!in_major_arc(xi, frac, n_next, box, cfg.gamma)) throw ParameterError("frequency lies outside the major-arc box");
  Complex discrete = discrete_multiplier(xi, n_next, mode, cfg, region, kernel) -
                     discrete_multiplier(xi, n_prev, mode, cfg, region, kernel);
  Complex g = gauss_sum(frac, cfg);
  RealVector theta = (xi - Frequency::from_fraction(frac)).value();
  ContinuousMode cm = counterpart(mode);
  Complex cont = continuous_multiplier(theta, n_next, cm, cfg.gamma, region, kernel) -
                 continuous_multiplier(theta, n_prev, cm, cfg.gamma, region, kernel);
  return std::abs(discrete - g * cont);
}

}  // namespace ergo
