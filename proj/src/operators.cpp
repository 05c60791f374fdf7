#include "ergo/operators.hpp"

#include <random>

namespace ergo {

// ---------------------------------------------------------------------------
// RealPolynomial

RealPolynomial::RealPolynomial(int k, std::vector<Term> terms, int max_degree) : k_(k) {
  if (k < 1) throw ParameterError("polynomial dimension must be >= 1");
  for (auto& term : terms) {
    if (static_cast<int>(term.exponents.size()) != k) throw ParameterError("twist polynomial: bad exponent length");
    if (std::any_of(term.exponents.begin(), term.exponents.end(), [](int e) { return e < 0; }))
      throw ParameterError("twist polynomial: negative exponent");
    if (order(term.exponents) > max_degree) throw ParameterError("twist polynomial exceeds the maximum degree");
    // R(0) = 0: the constant term only rotates the output by a fixed phase.
    if (order(term.exponents) == 0 || term.coefficient == 0.0) continue;
    terms_.push_back(std::move(term));
  }
}

int RealPolynomial::degree() const {
  int d = 0;
  for (const auto& term : terms_) d = std::max(d, order(term.exponents));
  return d;
}

long double RealPolynomial::phase(const IntVector& x) const {
  if (x.size() != k_) throw ParameterError("twist polynomial: argument dimension mismatch");
  long double total = 0;
  for (const auto& term : terms_) {
    std::int64_t mono = 1;
    for (int c = 0; c < k_; ++c)
      mono = checked_mul(mono, detail::power<std::int64_t>(x[c], term.exponents[static_cast<std::size_t>(c)]));
    long double v = static_cast<long double>(term.coefficient) * static_cast<long double>(mono);
    total += v - std::floor(v);
  }
  return total - std::floor(total);
}

// ---------------------------------------------------------------------------
// Kernels

CZKernel::CZKernel(int k, Evaluator eval, KernelConstants claimed, std::string name)
    : k_(k), eval_(std::move(eval)), claimed_(claimed), name_(std::move(name)) {
  if (k < 1) throw ParameterError("kernel dimension must be >= 1");
  if (!eval_) throw ParameterError("kernel needs an evaluator");
}

CZKernel CZKernel::riesz(int k, int j) {
  if (k < 1 || j < 0 || j >= k) throw ParameterError("Riesz kernel index out of range");
  const double c = std::tgamma((k + 1) / 2.0) / std::pow(std::numbers::pi, (k + 1) / 2.0);
  return CZKernel(
      k, [=](const RealVector& x) { return c * x[j] / std::pow(x.norm(), k + 1); }, KernelConstants{},
      "riesz" + std::to_string(j));
}

CZKernel CZKernel::homogeneous(int k, std::function<double(const RealVector&)> omega0, KernelConstants claimed) {
  return CZKernel(
      k,
      [=](const RealVector& x) {
        double r = x.norm();
        return omega0(x / r) / std::pow(r, k);
      },
      claimed, "homogeneous");
}

double CZKernel::operator()(const RealVector& x) const {
  if (x.size() != k_) throw ParameterError("kernel argument dimension mismatch");
  if (x.isZero(0)) throw DomainError("kernel evaluated at the origin");
  return eval_(x);
}

KernelReport validate_kernel(const CZKernel& kernel, const Region& region, int samples, std::uint64_t seed,
                             const std::vector<double>& inner, const std::vector<double>& outer) {
  const int k = kernel.dimension();
  if (region.dimension() != k) throw ParameterError("kernel and region dimensions differ");
  if (samples < 1) throw ParameterError("validate_kernel needs samples >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto direction = [&] {
    RealVector v(k);
    do {
      for (int i = 0; i < k; ++i) v[i] = gauss(rng);
    } while (v.norm() == 0);
    return RealVector(v / v.norm());
  };

  KernelReport report;
  for (int s = 0; s < samples; ++s) {
    double r = std::pow(10.0, -3.0 + 6.0 * unif(rng));
    RealVector x = r * direction();
    report.size_statistic = std::max(report.size_statistic, std::abs(kernel(x)) * std::pow(r, k));
    double ry = 0.5 * r * std::max(unif(rng), 1e-6);
    RealVector y = ry * direction();
    double lip = std::abs(kernel(x) - kernel(x + y)) * std::pow(r, k + 1) / ry;
    report.lipschitz_statistic = std::max(report.lipschitz_statistic, lip);
  }
  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-13;
  for (double r : inner)
    for (double big_r : outer) {
      if (!(r < big_r)) continue;
      auto q = integrate_region([&](const RealVector& u) { return Complex(kernel(u)); }, region, r, big_r, opt);
      double v = std::abs(q.value);
      report.annuli.push_back({r, big_r, q.value.real()});
      report.cancellation_max = std::max(report.cancellation_max, v);
    }
  const auto& claimed = kernel.claimed();
  report.size_ok = report.size_statistic <= claimed.size;
  report.lipschitz_ok = report.lipschitz_statistic <= claimed.lipschitz;
  report.cancellation_ok = report.cancellation_max <= claimed.cancellation_tolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Stencils

namespace {

void check_map(const LatticeConfig& cfg, const Region& region, const IntegerPolynomialMap& pmap) {
  if (pmap.domain_dimension() != cfg.k) throw ParameterError("polynomial map domain must have dimension k");
  if (region.dimension() != cfg.k) throw ParameterError("region dimension must equal k");
}

Stencil build_stencil(double t, const LatticeConfig& cfg, const Region& region, const IntegerPolynomialMap& pmap,
                      const PrimeTable* table, const std::function<Complex(const IntVector&, double)>& weight) {
  check_map(cfg, region, pmap);
  std::map<IntVector, Complex, LexLess> merged;
  for_each_weighted_point(
      cfg, region, t,
      [&](const IntVector& np, double w) {
        Complex c = weight(np, w);
        if (c == Complex{}) return;
        auto [it, inserted] = merged.try_emplace(pmap(np), c);
        if (!inserted) it->second += c;
      },
      table);
  Stencil s;
  s.dimension = pmap.dimension();
  s.taps.assign(merged.begin(), merged.end());
  return s;
}

}  // namespace

Signal apply_stencil(const Stencil& stencil, const Signal& f) {
  if (!f.empty() && f.dimension() != stencil.dimension)
    throw ParameterError("signal dimension does not match the operator");
  Signal out(stencil.dimension);
  for (const auto& [y, v] : f)
    for (const auto& [shift, w] : stencil.taps) out.add(y + shift, w * v);
  return out.prune();
}

Stencil average_stencil(double t, const LatticeConfig& cfg, const Region& region, const IntegerPolynomialMap& pmap,
                        const PrimeTable* table) {
  Stencil s = build_stencil(t, cfg, region, pmap, table, [](const IntVector&, double w) { return Complex(w); });
  CompensatedSum theta;
  for (const auto& [shift, w] : s.taps) theta.add(w.real());
  s.normalizer = static_cast<double>(theta.value());
  if (!(s.normalizer > 0)) throw EmptyAverageError("theta_Omega(t) = 0: the average is empty");
  for (auto& tap : s.taps) tap.second /= s.normalizer;
  return s;
}

Stencil cotlar_stencil(double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region,
                       const IntegerPolynomialMap& pmap, const PrimeTable* table) {
  if (kernel.dimension() != cfg.k) throw ParameterError("kernel dimension must equal k");
  return build_stencil(t, cfg, region, pmap, table, [&](const IntVector& np, double w) {
    if (np.isZero()) return Complex{};
    return Complex(kernel(np.cast<double>()) * w);
  });
}

Stencil twisted_stencil(double t, const RealPolynomial& twist, const LatticeConfig& cfg, const Region& region,
                        const IntegerPolynomialMap& pmap, const PrimeTable* table) {
  if (twist.dimension() != cfg.k) throw ParameterError("twist polynomial dimension must equal k");
  CompensatedSum theta;
  Stencil s = build_stencil(t, cfg, region, pmap, table, [&](const IntVector& np, double w) {
    theta.add(w);
    return w * unit_phase(twist.phase(np));
  });
  s.normalizer = static_cast<double>(theta.value());
  if (!(s.normalizer > 0)) throw EmptyAverageError("theta_Omega(t) = 0: the average is empty");
  for (auto& tap : s.taps) tap.second /= s.normalizer;
  return s;
}

Signal average_A(const Signal& f, double t, const LatticeConfig& cfg, const Region& region,
                 const IntegerPolynomialMap& pmap) {
  return apply_stencil(average_stencil(t, cfg, region, pmap), f);
}

Signal average_A(const Signal& f, double t, const LatticeConfig& cfg, const Region& region) {
  return average_A(f, t, cfg, region, IntegerPolynomialMap::canonical(cfg.gamma));
}

Signal cotlar_H(const Signal& f, double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region,
                const IntegerPolynomialMap& pmap) {
  return apply_stencil(cotlar_stencil(t, kernel, cfg, region, pmap), f);
}

Signal cotlar_H(const Signal& f, double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region) {
  return cotlar_H(f, t, kernel, cfg, region, IntegerPolynomialMap::canonical(cfg.gamma));
}

Signal twisted_average(const Signal& f, double t, const RealPolynomial& twist, const LatticeConfig& cfg,
                       const Region& region, const IntegerPolynomialMap& pmap) {
  return apply_stencil(twisted_stencil(t, twist, cfg, region, pmap), f);
}

Signal twisted_average(const Signal& f, double t, const RealPolynomial& twist, const LatticeConfig& cfg,
                       const Region& region) {
  return twisted_average(f, t, twist, cfg, region, IntegerPolynomialMap::canonical(cfg.gamma));
}

double cotlar_l1_bound(double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region) {
  CompensatedSum sum;
  for_each_weighted_point(cfg, region, t, [&](const IntVector& np, double w) {
    if (!np.isZero()) sum.add(std::abs(kernel(np.cast<double>())) * w);
  });
  return static_cast<double>(sum.value());
}

}  // namespace ergo
