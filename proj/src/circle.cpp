#include "ergo/circle.hpp"

#include "ergo/primes.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ergo {

namespace {

std::int64_t floor_power_of_two(long double exponent, const char* what) {
  if (exponent < 0) return 0;
  if (exponent >= 63) throw ResourceError(std::string(what) + " exceeds 64 bits");
  return static_cast<std::int64_t>(std::floor(std::exp2(exponent)));
}

}  // namespace

ParameterPlan ParameterPlan::make(double p, double p0, double tau, double chi, double rho, double beta, int u,
                                  double delta, const GammaSet& gamma) {
  if (!(p > 1) || !std::isfinite(p)) throw ParameterError("plan: p must lie in (1, inf)");
  const double tau_max = 1.0 - 1.0 / std::min(2.0, p);
  if (!(tau > 0) || !(tau < tau_max))
    throw ParameterError("plan: tau must satisfy 0 < tau < 1 - 1/min(2, p) = " + std::to_string(tau_max));
  if (!(chi > 0) || !(chi < 0.1)) throw ParameterError("plan: chi must lie in (0, 1/10)");
  if (p != 2.0) {
    if (!(p0 > 1) || !std::isfinite(p0)) throw ParameterError("plan: p0 must lie in (1, inf)");
    if (p < 2 ? !(p0 < p) : !(p0 > p)) throw ParameterError("plan: p0 must lie beyond p, away from 2");
    const double bound = (p * p0 - 2 * p) / (2 * p0 - 2 * p) / tau;
    if (!(rho > bound)) throw ParameterError("plan: rho must exceed " + std::to_string(bound));
  }
  if (!(beta > 0)) throw ParameterError("plan: beta must be positive");
  if (gamma.empty()) throw ParameterError("plan: Gamma is empty");
  if (!(u >= 1) || !(u > static_cast<double>(gamma.size()) * beta))
    throw ParameterError("plan: u must be a positive integer exceeding |Gamma| beta");
  if (!(delta > 0)) throw ParameterError("plan: delta must be positive");
  ParameterPlan plan;
  plan.p = p;
  plan.p0 = p0;
  plan.tau = tau;
  plan.chi = chi;
  plan.rho = rho;
  plan.beta = beta;
  plan.u = u;
  plan.delta = delta;
  plan.varrho = std::min(chi / (10.0 * u), delta / (8.0 * tau));
  plan.gamma_size = gamma.size();
  return plan;
}

double ParameterPlan::default_delta(const GammaSet& gamma) {
  int top = 0;
  bool quadratic = !gamma.empty();
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    top = std::max(top, gamma.order(i));
    quadratic = quadratic && gamma.order(i) == 2;
  }
  if (quadratic) return 0.5;
  return 1.0 / (2.0 * std::max(top, 1));
}

double ParameterPlan::kappa(std::int64_t s) const {
  return std::pow(static_cast<double>(s), 2.0 * std::floor(varrho));
}

std::int64_t ParameterPlan::large_scale_start(std::int64_t s) const {
  const double e = kappa(s) / tau;
  if (e >= 62) throw ResourceError("2^{kappa_s / tau} exceeds 64 bits");
  return static_cast<std::int64_t>(std::ceil(std::exp2(e)));
}

std::int64_t ParameterPlan::S_M(std::int64_t m) const {
  const long double mt = std::pow(static_cast<long double>(m), static_cast<long double>(tau));
  return floor_power_of_two(mt - 3 * std::pow(mt, static_cast<long double>(chi)), "S_M");
}

std::int64_t ParameterPlan::J_s(std::int64_t s) const {
  const long double k = kappa(s);
  if (k >= 62) throw ResourceError("J_s exceeds 64 bits");
  return floor_power_of_two(std::exp2(k) - 3 * std::exp2(k * chi), "J_s");
}

std::vector<std::int64_t> build_P_leq(std::int64_t n) {
  if (n < 1) throw ParameterError("P_{<=N} requires N >= 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), std::int64_t{1});
  return out;
}

unsigned __int128 lcm_of(const std::vector<std::int64_t>& values) {
  using U = unsigned __int128;
  U acc = 1;
  for (std::int64_t v : values) {
    if (v < 1) throw ParameterError("lcm of a nonpositive integer");
    U a = acc, b = static_cast<U>(v);
    while (b != 0) {
      U r = a % b;
      a = b;
      b = r;
    }
    U factor = static_cast<U>(v) / a;
    if (factor != 0 && acc > ~U{0} / factor) throw OverflowError("lcm exceeds 128 bits");
    acc *= factor;
  }
  return acc;
}

unsigned __int128 power_of_three(int n) {
  if (n < 0 || n > 80) throw OverflowError("3^n is only tabulated for 0 <= n <= 80");
  unsigned __int128 r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

std::string to_decimal(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

bool FractionSet::contains(const ReducedFraction& f) const {
  return std::binary_search(members.begin(), members.end(), f, FractionLess{});
}

FractionSet fractions_leq(std::int64_t n, const GammaSet& gamma, std::size_t cap) {
  const auto dims = static_cast<Eigen::Index>(gamma.size());
  if (dims == 0) throw ParameterError("Gamma is empty");
  const auto denominators = build_P_leq(n);
  long double total = 0;
  for (std::int64_t q : denominators) total += std::pow(static_cast<long double>(q), static_cast<long double>(dims));
  if (total > static_cast<long double>(cap))
    throw ResourceError("Sigma_{<=" + std::to_string(n) + "} would hold about " +
                        std::to_string(static_cast<double>(total)) + " candidates (cap " + std::to_string(cap) + ")");
  FractionSet out;
  IntVector a(dims);
  for (std::int64_t q : denominators) {
    a.setOnes();
    while (true) {
      std::int64_t g = q;
      for (Eigen::Index i = 0; i < dims; ++i) g = std::gcd(g, a[i]);
      if (g == 1) out.members.push_back({a, q});
      Eigen::Index i = dims - 1;
      for (; i >= 0; --i) {
        if (++a[i] <= q) break;
        a[i] = 1;
      }
      if (i < 0) break;
    }
  }
  return out;
}

bool is_annulus_level(std::int64_t s, int u) {
  if (u < 1 || u > 62 || s < 2) return false;
  const std::int64_t base = std::int64_t{1} << u;
  std::int64_t level = base;
  while (level < s) {
    if (level > std::numeric_limits<std::int64_t>::max() / base) return false;
    level *= base;
  }
  return level == s;
}

FractionSet fractions_annulus(std::int64_t s, int u, const GammaSet& gamma, std::size_t cap) {
  if (!is_annulus_level(s, u)) throw ParameterError("annulus level " + std::to_string(s) + " is not in 2^{uN}");
  const std::int64_t base = std::int64_t{1} << u;
  FractionSet full = fractions_leq(s, gamma, cap);
  if (s == base) return full;
  FractionSet inner = fractions_leq(s / base, gamma, cap);
  FractionSet out;
  std::set_difference(full.members.begin(), full.members.end(), inner.members.begin(), inner.members.end(),
                      std::back_inserter(out.members), FractionLess{});
  return out;
}

std::optional<std::int64_t> annulus_floor(double t, int u) {
  if (u < 1 || u > 62) throw ParameterError("u must lie in [1, 62]");
  const std::int64_t base = std::int64_t{1} << u;
  if (!(t >= static_cast<double>(base))) return std::nullopt;
  std::int64_t s = base;
  while (s <= std::numeric_limits<std::int64_t>::max() / base && static_cast<double>(s * base) <= t) s *= base;
  return s;
}

namespace {

double smooth_step(double y) {
  if (y <= 0) return 0;
  if (y >= 1) return 1;
  const double g0 = std::exp(-1.0 / y), g1 = std::exp(-1.0 / (1.0 - y));
  return g0 / (g0 + g1);
}

double plateau(std::size_t size) { return 1.0 / (32.0 * static_cast<double>(size)); }
double cutoff(std::size_t size) { return 1.0 / (16.0 * static_cast<double>(size)); }

}  // namespace

double bump_eta(const RealVector& x) {
  if (x.size() == 0) return 1.0;
  const auto size = static_cast<std::size_t>(x.size());
  const double m = x.cwiseAbs().maxCoeff();
  const double lo = plateau(size), hi = cutoff(size);
  return 1.0 - smooth_step((m - lo) / (hi - lo));
}

double bump_eta_scaled(double n, double chi, const RealVector& xi, const GammaSet& gamma, BumpVariant variant) {
  if (!(n > 0)) throw ParameterError("eta_N requires N > 0");
  if (static_cast<std::size_t>(xi.size()) != gamma.size()) throw ParameterError("frequency must be indexed by Gamma");
  const double log_cut = std::log2(cutoff(gamma.size()));
  RealVector scaled(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    double v = variant == BumpVariant::tilde ? xi[i] / 2 : xi[i];
    if (v == 0) {
      scaled[i] = 0;
      continue;
    }
    // Work in log2 so that 2^{N|gamma|} never overflows.
    const double e = std::log2(std::abs(v)) + n * gamma.order(static_cast<std::size_t>(i)) - std::pow(n, chi);
    if (e >= log_cut) return 0.0;
    scaled[i] = std::copysign(std::exp2(e), v);
  }
  return bump_eta(scaled);
}

double bump_support_radius(double n, double chi, int order, std::size_t gamma_size, BumpVariant variant) {
  const double r = cutoff(gamma_size) * std::exp2(-n * order + std::pow(n, chi));
  return variant == BumpVariant::tilde ? 2 * r : r;
}

std::int64_t scale_sequence(std::int64_t n, double tau) {
  if (n < 0) throw ParameterError("scale index must be nonnegative");
  if (!(tau > 0) || !(tau <= 1)) throw ParameterError("scale sequence requires 0 < tau <= 1");
  const long double e = std::pow(static_cast<long double>(n), static_cast<long double>(tau));
  if (e >= 63) throw ResourceError("N_n = 2^{n^tau} exceeds 64 bits");
  return static_cast<std::int64_t>(std::floor(std::exp2(e)));
}

RealVector torus_offset(const Frequency& xi, const ReducedFraction& frac) {
  return (xi - Frequency::from_fraction(frac)).value();
}

double annuli_multiplier(std::int64_t j, const FractionSet& sigma, const ParameterPlan& plan, const GammaSet& gamma,
                         const Frequency& xi) {
  if (j < 1) throw ParameterError("annuli functions need j >= 1");
  const double n = std::pow(static_cast<double>(j), plan.tau);
  CompensatedSum total;
  for (const auto& f : sigma.members) total.add(bump_eta_scaled(n, plan.chi, torus_offset(xi, f), gamma));
  return static_cast<double>(total.value());
}

double annuli_multiplier(std::int64_t j, std::int64_t s, const ParameterPlan& plan, const GammaSet& gamma,
                         const Frequency& xi) {
  return annuli_multiplier(j, fractions_annulus(s, plan.u, gamma), plan, gamma, xi);
}

double annuli_multiplier_leq(std::int64_t j, const ParameterPlan& plan, const GammaSet& gamma, const Frequency& xi) {
  if (j < 1) throw ParameterError("annuli functions need j >= 1");
  auto top = annulus_floor(std::pow(static_cast<double>(j), plan.tau * plan.u), plan.u);
  if (!top) return 0.0;
  return annuli_multiplier(j, fractions_leq(*top, gamma), plan, gamma, xi);
}

std::vector<std::int64_t> annulus_levels_upto(std::int64_t j, const ParameterPlan& plan) {
  std::vector<std::int64_t> out;
  auto top = annulus_floor(std::pow(static_cast<double>(j), plan.tau * plan.u), plan.u);
  if (!top) return out;
  for (std::int64_t s = std::int64_t{1} << plan.u; s <= *top; s <<= plan.u) out.push_back(s);
  return out;
}

namespace {

Complex theta(const CompositeContext& ctx, const RealVector& xi, std::int64_t index) {
  const auto t = static_cast<double>(scale_sequence(index, ctx.plan.tau));
  return continuous_multiplier(xi, t, ctx.theta, ctx.cfg.gamma, ctx.region, ctx.kernel, ctx.quadrature);
}

}  // namespace

Complex composite_multiplier(CompositeVariant variant, std::int64_t index, std::int64_t s, const CompositeContext& ctx,
                             const Frequency& xi) {
  const auto& plan = ctx.plan;
  const auto& gamma = ctx.cfg.gamma;
  if (xi.size() != gamma.size()) throw ParameterError("frequency must be indexed by Gamma");
  switch (variant) {
    case CompositeVariant::v:
    case CompositeVariant::Lambda: {
      if (index < 1) throw ParameterError("v and Lambda need j >= 1");
      const double n = std::pow(static_cast<double>(index), plan.tau);
      Complex total = 0;
      for (const auto& f : fractions_annulus(s, plan.u, gamma).members) {
        const RealVector offset = torus_offset(xi, f);
        const double bump = bump_eta_scaled(n, plan.chi, offset, gamma);
        if (bump == 0) continue;  // spares the quadrature outside the support
        Complex term = (theta(ctx, offset, index) - theta(ctx, offset, index - 1)) * bump;
        if (variant == CompositeVariant::v) term *= gauss_sum(f, ctx.cfg);
        total += term;
      }
      return total;
    }
    case CompositeVariant::w:
    case CompositeVariant::Pi: {
      const double n = std::exp2(plan.kappa(s));
      Complex total = 0;
      for (const auto& f : fractions_annulus(s, plan.u, gamma).members) {
        const double bump = bump_eta_scaled(n, plan.chi, torus_offset(xi, f), gamma, BumpVariant::tilde);
        if (bump == 0) continue;
        total += variant == CompositeVariant::w ? gauss_sum(f, ctx.cfg) * bump : Complex(bump);
      }
      return total;
    }
    case CompositeVariant::omega: {
      if (!is_annulus_level(s, plan.u)) throw ParameterError("s is not in 2^{uN}");
      const std::int64_t start = plan.large_scale_start(s);
      const RealVector& x = xi.value();
      Complex total = 0;
      for (std::int64_t j = start; j <= index; ++j) {
        const double bump = bump_eta_scaled(std::pow(static_cast<double>(j), plan.tau), plan.chi, x, gamma);
        if (bump == 0) continue;
        total += (theta(ctx, x, j) - theta(ctx, x, j - 1)) * bump;
      }
      return total;
    }
    case CompositeVariant::Delta: {
      if (!is_annulus_level(s, plan.u)) throw ParameterError("s is not in 2^{uN}");
      const std::int64_t start = plan.large_scale_start(s);
      if (index < start) return 0.0;  // empty range
      return theta(ctx, xi.value(), index) - theta(ctx, xi.value(), start - 1);
    }
  }
  throw ParameterError("unknown composite multiplier");
}

SupportReport support_radius_check(const ParameterPlan& plan, std::int64_t s, const GammaSet& gamma) {
  if (!is_annulus_level(s, plan.u)) throw ParameterError("s is not in 2^{uN}");
  SupportReport report;
  report.s = s;
  report.kappa = plan.kappa(s);
  // Every q in P_{<=s} \ P_{<=s/2^u} carries the reduced fraction (1, ..., 1)/q,
  // so the moduli of Sigma_s are exactly that range.
  const std::int64_t base = std::int64_t{1} << plan.u;
  const std::int64_t lo = s == base ? 0 : s / base;
  std::map<std::int64_t, int> exponent;  // prime -> exponent in Q_s
  for (std::int64_t q = lo + 1; q <= s; ++q)
    for (std::int64_t p : prime_divisors(q)) {
      int e = 0;
      for (std::int64_t r = q; r % p == 0; r /= p) ++e;
      exponent[p] = std::max(exponent[p], e);
    }
  long double log2_q = 0;
  report.divides_full_lcm = true;
  for (const auto& [p, e] : exponent) {
    log2_q += e * std::log2(static_cast<long double>(p));
    int full = 0;
    for (std::int64_t r = p; r <= s; r *= p) ++full;
    report.divides_full_lcm = report.divides_full_lcm && e <= full;
  }
  if (log2_q < 126) {
    unsigned __int128 q = 1;
    for (const auto& [p, e] : exponent)
      for (int i = 0; i < e; ++i) q *= static_cast<unsigned __int128>(p);
    report.q_s = to_decimal(q);
    report.lcm_bound_ok = s <= 80 ? q <= power_of_three(static_cast<int>(s))
                                  : log2_q <= s * std::log2(3.0L);
  } else {
    report.q_s = "2^" + std::to_string(static_cast<double>(log2_q));
    report.lcm_bound_ok = log2_q <= s * std::log2(3.0L);
  }
  const long double lhs = -std::exp2(static_cast<long double>(report.kappa)) +
                          std::exp2(static_cast<long double>(report.kappa * plan.chi));
  report.separation_holds = lhs <= -(2 + log2_q);
  report.support_checked = report.separation_holds;
  if (report.support_checked) {
    const double n = std::exp2(report.kappa);
    report.support_ok = true;
    for (std::size_t i = 0; i < gamma.size(); ++i)
      report.support_ok = report.support_ok &&
                          std::log2(bump_support_radius(n, plan.chi, gamma.order(i), gamma.size())) <= -(2 + log2_q);
  }
  return report;
}

DisjointnessReport bump_disjointness(std::int64_t j, const ParameterPlan& plan, const GammaSet& gamma) {
  if (j < 1) throw ParameterError("j must be >= 1");
  DisjointnessReport out;
  auto top = annulus_floor(std::pow(static_cast<double>(j), plan.tau * plan.u), plan.u);
  if (!top) return out;
  const FractionSet set = fractions_leq(*top, gamma);
  out.fractions = set.size();
  const double n = std::pow(static_cast<double>(j), plan.tau);
  std::vector<double> radius(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    radius[i] = bump_support_radius(n, plan.chi, gamma.order(i), gamma.size());
    out.support_radius = std::max(out.support_radius, radius[i]);
  }
  const double f = static_cast<double>(*top);
  out.arithmetic_holds = 2 * out.support_radius < 1.0 / (f * f);
  out.min_separation = set.size() > 1 ? 1.0 : 0.0;
  const auto dims = static_cast<Eigen::Index>(gamma.size());
  for (std::size_t x = 0; x < set.size(); ++x)
    for (std::size_t y = x + 1; y < set.size(); ++y) {
      const auto& a = set.members[x];
      const auto& b = set.members[y];
      const std::int64_t den = a.q * b.q;
      bool overlap = true;
      double separation = 0;
      for (Eigen::Index i = 0; i < dims; ++i) {
        std::int64_t m = mod_floor(a.a[i] * b.q - b.a[i] * a.q, den);
        const double d = static_cast<double>(std::min(m, den - m)) / static_cast<double>(den);
        separation = std::max(separation, d);
        overlap = overlap && d < 2 * radius[static_cast<std::size_t>(i)];
      }
      out.min_separation = std::min(out.min_separation, separation);
      if (overlap) ++out.overlapping_pairs;
    }
  return out;
}

}  // namespace ergo
