#include "ergo/harness.hpp"

#include "ergo/fourier.hpp"
#include "ergo/primes.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace ergo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

nlohmann::json cfg_to_json(const LatticeConfig& cfg) {
  return {{"k", cfg.k}, {"k_int", cfg.k_int}, {"k_prime", cfg.k_prime}, {"gamma", gamma_to_json(cfg.gamma)}};
}

GammaSet gamma_from(int k, std::vector<MultiIndex> indices) { return GammaSet(k, std::move(indices)); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Every reduced a/q with the given q, by odometer over [1, q]^dims.
template <typename Visit>
void for_each_reduced(std::int64_t q, Eigen::Index dims, Visit&& visit) {
  IntVector a = IntVector::Ones(dims);
  while (true) {
    std::int64_t g = q;
    for (Eigen::Index i = 0; i < dims; ++i) g = std::gcd(g, a[i]);
    if (g == 1) visit(a);
    Eigen::Index i = dims - 1;
    for (; i >= 0; --i) {
      if (++a[i] <= q) break;
      a[i] = 1;
    }
    if (i < 0) return;
  }
}

}  // namespace

nlohmann::json plan_to_json(const ParameterPlan& plan) {
  return {{"p", plan.p},         {"p0", plan.p0},       {"tau", plan.tau},   {"chi", plan.chi},
          {"rho", plan.rho},     {"beta", plan.beta},   {"u", plan.u},       {"delta", plan.delta},
          {"varrho", plan.varrho}, {"delta_heuristic", true},
          {"beta_note", "user-chosen; no explicit beta_rho is known"}};
}

nlohmann::json gamma_to_json(const GammaSet& gamma) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : gamma.indices()) out.push_back(g);
  return out;
}

// ---------------------------------------------------------------------------
// jump boundedness

ExperimentReport run_jump_boundedness(const LatticeConfig& cfg, const Region& region, const ParameterPlan& plan,
                                      double p, int trials, int scales, std::uint64_t seed, const JumpOptions& opt) {
  const auto start = Clock::now();
  if (scales < 8) throw ParameterError("jump boundedness needs at least 8 scales");
  if (trials < 1) throw ParameterError("trials must be positive");
  if (!(p > 1) || !std::isfinite(p)) throw ParameterError("p must lie in (1, inf)");
  if (!(opt.t0 > 0) || !(opt.ratio > 1)) throw ParameterError("t-grid needs t0 > 0 and ratio > 1");
  std::vector<int> sizes;
  for (int s = 8; s <= scales; s *= 2) sizes.push_back(s);
  const int full = sizes.back();
  std::vector<double> times(static_cast<std::size_t>(full));
  for (int i = 0; i < full; ++i) times[static_cast<std::size_t>(i)] = opt.t0 * std::pow(opt.ratio, i);

  // Every tap once, tagged with the first grid index at which it enters Omega_t.
  struct Tap {
    IntVector shift;
    int entry;
    double weight;
  };
  const auto pmap = IntegerPolynomialMap::canonical(cfg.gamma);
  std::vector<Tap> raw;
  for_each_weighted_point(cfg, region, times.back(), [&](const IntVector& pt, double w) {
    const RealVector x = pt.cast<double>();
    int lo = 0, hi = full - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (region.contains(times[static_cast<std::size_t>(mid)], x))
        hi = mid;
      else
        lo = mid + 1;
    }
    raw.push_back({pmap(pt), lo, w});
  });
  std::vector<long double> theta(static_cast<std::size_t>(full), 0.0L);
  for (const auto& tap : raw) theta[static_cast<std::size_t>(tap.entry)] += tap.weight;
  for (int i = 1; i < full; ++i) theta[static_cast<std::size_t>(i)] += theta[static_cast<std::size_t>(i - 1)];
  if (!(theta[0] > 0)) throw EmptyAverageError("theta_Omega(t0) = 0: the first average of the grid is empty");
  std::sort(raw.begin(), raw.end(), [](const Tap& a, const Tap& b) {
    if (a.shift != b.shift) return LexLess{}(a.shift, b.shift);
    return a.entry < b.entry;
  });
  std::vector<Tap> taps;
  for (auto& tap : raw) {
    if (!taps.empty() && taps.back().shift == tap.shift && taps.back().entry == tap.entry)
      taps.back().weight += tap.weight;
    else
      taps.push_back(std::move(tap));
  }

  // J(g_e) for the unit curve entering at index e, truncated to each grid size.
  std::vector<std::vector<double>> unit_jump(sizes.size(), std::vector<double>(static_cast<std::size_t>(full), 0.0));
  for (std::size_t si = 0; si < sizes.size(); ++si)
    for (int e = 0; e < sizes[si]; ++e) {
      std::vector<Complex> g(static_cast<std::size_t>(sizes[si]), 0.0);
      for (int i = e; i < sizes[si]; ++i) g[static_cast<std::size_t>(i)] = static_cast<double>(1.0L / theta[static_cast<std::size_t>(i)]);
      unit_jump[si][static_cast<std::size_t>(e)] = jump_functional(g);
    }

  ExperimentReport report;
  report.experiment = "jump_boundedness";
  report.seed = seed;
  report.params = {{"cfg", cfg_to_json(cfg)},   {"p", p},           {"trials", trials},
                   {"grid_sizes", sizes},       {"t0", opt.t0},     {"ratio", opt.ratio},
                   {"support", opt.support},    {"radius", opt.radius}, {"delta", opt.delta},
                   {"plan", plan_to_json(plan)}, {"taps", taps.size()},
                   {"statistic", "pointwise: || sup_lambda lambda N_lambda^{1/2} ||_p / ||f||_p"},
                   {"grid_note", "A_t is a step function of t; grid points inside one lattice shell add nothing"}};

  const auto dims = static_cast<Eigen::Index>(cfg.gamma.size());
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed + 7919ULL * static_cast<std::uint64_t>(trial));
    const Signal f = opt.delta ? Signal::delta(static_cast<int>(dims))
                               : random_signal(static_cast<int>(dims), opt.support, opt.radius, p, rng);
    const double f_norm = f.norm(p);

    std::vector<std::int64_t> coords;
    std::vector<int> entry;
    std::vector<Complex> value;
    const std::size_t records = f.size() * taps.size();
    coords.reserve(records * static_cast<std::size_t>(dims));
    entry.reserve(records);
    value.reserve(records);
    for (const auto& [y, v] : f)
      for (const auto& tap : taps) {
        for (Eigen::Index a = 0; a < dims; ++a) coords.push_back(y[a] + tap.shift[a]);
        entry.push_back(tap.entry);
        value.push_back(v * tap.weight);
      }
    std::vector<std::uint32_t> order(records);
    std::iota(order.begin(), order.end(), 0u);
    auto at = [&](std::uint32_t r) { return coords.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(dims); };
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      const std::int64_t* pa = at(a);
      const std::int64_t* pb = at(b);
      return std::lexicographical_compare(pa, pa + dims, pb, pb + dims);
    });

    std::vector<long double> bucket(static_cast<std::size_t>(full), 0.0L);  // sum |V|^p per entry index
    std::vector<long double> mixed(sizes.size(), 0.0L);
    for (std::size_t g0 = 0; g0 < records;) {
      std::size_t g1 = g0 + 1;
      while (g1 < records && std::equal(at(order[g0]), at(order[g0]) + dims, at(order[g1]))) ++g1;
      bool single = true;
      Complex total = 0;
      for (std::size_t r = g0; r < g1; ++r) {
        single = single && entry[order[r]] == entry[order[g0]];
        total += value[order[r]];
      }
      if (single) {
        bucket[static_cast<std::size_t>(entry[order[g0]])] += std::pow(static_cast<long double>(std::abs(total)), p);
      } else {
        std::vector<Complex> sums(static_cast<std::size_t>(full), 0.0);
        for (std::size_t r = g0; r < g1; ++r) sums[static_cast<std::size_t>(entry[order[r]])] += value[order[r]];
        std::vector<Complex> curve(static_cast<std::size_t>(full));
        Complex running = 0;
        for (int i = 0; i < full; ++i) {
          running += sums[static_cast<std::size_t>(i)];
          curve[static_cast<std::size_t>(i)] = running / static_cast<double>(theta[static_cast<std::size_t>(i)]);
        }
        for (std::size_t si = 0; si < sizes.size(); ++si) {
          std::vector<Complex> prefix(curve.begin(), curve.begin() + sizes[si]);
          mixed[si] += std::pow(static_cast<long double>(jump_functional(prefix)), p);
        }
      }
      g0 = g1;
    }
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      long double total = mixed[si];
      for (int e = 0; e < sizes[si]; ++e)
        total += bucket[static_cast<std::size_t>(e)] *
                 std::pow(static_cast<long double>(unit_jump[si][static_cast<std::size_t>(e)]), p);
      const double ratio = static_cast<double>(std::pow(total, 1.0L / p)) / f_norm;
      report.series.push_back({static_cast<double>(sizes[si]), ratio, "seed " + std::to_string(trial)});
    }
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// short variation

ExperimentReport run_short_variation(const LatticeConfig& cfg, const Region& region, double tau, std::int64_t n_lo,
                                     std::int64_t n_hi, int density) {
  const auto start = Clock::now();
  if (n_lo < 1 || n_hi < n_lo) throw ParameterError("short variation needs 1 <= n_lo <= n_hi");
  if (density < 1) throw ParameterError("grid density must be positive");
  ExperimentReport report;
  report.experiment = "short_variation";
  report.params = {{"cfg", cfg_to_json(cfg)}, {"tau", tau}, {"n_lo", n_lo}, {"n_hi", n_hi}, {"density", density}};
  const auto pmap = IntegerPolynomialMap::canonical(cfg.gamma);
  const int dims = static_cast<int>(cfg.gamma.size());
  const Signal delta = Signal::delta(dims);
  std::vector<double> xs, vs;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    const auto a = scale_sequence(n, tau), b = scale_sequence(n + 1, tau);
    double total = 0;
    if (b > a) {
      std::vector<double> times;
      std::vector<Signal> family;
      for (std::int64_t i = 0;; ++i) {
        const double t = static_cast<double>(a) + static_cast<double>(i) / density;
        if (!(t < static_cast<double>(b))) break;
        times.push_back(t);
        family.push_back(apply_stencil(average_stencil(t, cfg, region, pmap), delta));
      }
      const PointCurves curves = family_curves(times, family);
      CompensatedSum sum;
      for (const auto& c : curves.curves) sum.add(variation(SampledCurve(times, c), 1.0));
      total = static_cast<double>(sum.value());
    }
    const double ratio = total / std::pow(static_cast<double>(n), tau - 1.0);
    report.series.push_back({static_cast<double>(n), total, "V1"});
    report.series.push_back({static_cast<double>(n), ratio, "ratio"});
    xs.push_back(static_cast<double>(n));
    vs.push_back(total);
  }
  try {
    report.fits.push_back(fit_power_law("V1 against n", xs, vs));
  } catch (const ParameterError&) {
    // too few nonzero windows to fit
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Gauss sums

ExperimentReport run_gauss_decay(const LatticeConfig& cfg, std::int64_t q_max, bool odd_only) {
  const auto start = Clock::now();
  if (q_max < 1) throw ParameterError("q_max must be positive");
  const auto dims = static_cast<Eigen::Index>(cfg.gamma.size());
  long double work = 0;
  for (std::int64_t q = 1; q <= q_max; ++q) work += std::pow(static_cast<long double>(q), static_cast<long double>(dims));
  if (work > 5e6L) throw ResourceError("Gauss decay sweep would visit more than 5e6 fractions");
  ExperimentReport report;
  report.experiment = "gauss_decay";
  report.params = {{"cfg", cfg_to_json(cfg)}, {"q_max", q_max}, {"odd_only", odd_only}};
  std::vector<double> xs, ys;
  for (std::int64_t q = odd_only ? 3 : 1; q <= q_max; q += odd_only ? 2 : 1) {
    double hi = 0, lo = std::numeric_limits<double>::infinity();
    for_each_reduced(q, dims, [&](const IntVector& a) {
      const double g = std::abs(gauss_sum(ReducedFraction::make(a, q), cfg));
      hi = std::max(hi, g);
      lo = std::min(lo, g);
    });
    report.series.push_back({static_cast<double>(q), hi, "max"});
    report.series.push_back({static_cast<double>(q), lo, "min"});
    xs.push_back(static_cast<double>(q));
    ys.push_back(hi);
  }
  try {
    report.fits.push_back(fit_power_law("max |G| against q", xs, ys));
  } catch (const ParameterError&) {
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Weyl sums

ExperimentReport run_weyl_decay(double xi1, const std::vector<double>& n_list) {
  const auto start = Clock::now();
  if (n_list.empty()) throw ParameterError("N list is empty");
  const LatticeConfig cfg = LatticeConfig::make(1, 0, gamma_from(1, {{1}, {2}}));
  const Region ball = Region::ball(1);
  ExperimentReport report;
  report.experiment = "weyl_decay";
  report.params = {{"cfg", cfg_to_json(cfg)},
                   {"xi1", xi1},
                   {"N", n_list},
                   {"surrogate", "xi2 = convergent p/q of sqrt(2) - 1 with the largest q <= N"}};
  std::vector<double> xs, ys;
  for (double n : n_list) {
    // Convergents of sqrt(2) - 1 = [0; 2, 2, 2, ...].
    std::int64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
    while (2 * q + q_prev <= n) {
      const std::int64_t p_next = 2 * p + p_prev, q_next = 2 * q + q_prev;
      p_prev = p;
      q_prev = q;
      p = p_next;
      q = q_next;
    }
    const double count = chebyshev_omega(n, cfg, ball);
    Frequency rational = xi1 == 0 ? Frequency::rational((IntVector(2) << 0, p).finished(),
                                                        (IntVector(2) << 1, q).finished())
                                  : Frequency::real((RealVector(2) << xi1, static_cast<double>(p) / q).finished());
    const double conv = std::abs(weyl_sum(rational, unit_weight, cfg, ball, nullptr, n)) / count;
    const Frequency fixed = Frequency::real((RealVector(2) << xi1, std::sqrt(2.0) - 1).finished());
    const double irr = std::abs(weyl_sum(fixed, unit_weight, cfg, ball, nullptr, n)) / count;
    report.series.push_back({n, conv, "convergent"});
    report.series.push_back({n, irr, "fixed"});
    report.series.push_back({n, static_cast<double>(q), "denominator"});
    xs.push_back(n);
    ys.push_back(conv);
  }
  if (xs.size() > 1) report.fits.push_back(fit_power_law("convergent magnitude against N", xs, ys));
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Siegel-Walfisz

ExperimentReport run_sw_decay(std::int64_t q_max, const std::vector<double>& x_list) {
  const auto start = Clock::now();
  if (q_max < 1 || x_list.empty()) throw ParameterError("sw decay needs q_max >= 1 and a nonempty x list");
  const double x_max = *std::max_element(x_list.begin(), x_list.end());
  const PrimeTable table = sieve_primes(static_cast<std::uint64_t>(x_max));
  ExperimentReport report;
  report.experiment = "sw_decay";
  report.params = {{"q_max", q_max}, {"x", x_list}};
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const double phi = static_cast<double>(euler_totient(q));
    for (std::int64_t r : units_mod(q)) {
      const ResidueClass cls(q, r == 0 ? q : r);
      const std::string label = "q=" + std::to_string(q) + " r=" + std::to_string(cls.residue());
      for (double x : x_list) {
        const double main = x / phi;
        report.series.push_back({x, std::abs(chebyshev_theta(x, cls, table) - main) / main, label});
      }
    }
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// major-arc approximation

ExperimentReport run_approx_decay(const LatticeConfig& cfg, const Region& region, const ReducedFraction& frac,
                                  const std::vector<double>& t_list, MultiplierMode mode, std::uint64_t seed,
                                  const CZKernel* kernel) {
  const auto start = Clock::now();
  if (t_list.empty()) throw ParameterError("t list is empty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  RealVector offset(static_cast<Eigen::Index>(cfg.gamma.size()));
  for (Eigen::Index i = 0; i < offset.size(); ++i) offset[i] = unit(rng);
  const std::string label = mode == MultiplierMode::average ? "average" : "cotlar";
  ExperimentReport report;
  report.experiment = "approx_decay";
  report.seed = seed;
  report.params = {{"cfg", cfg_to_json(cfg)},
                   {"a", std::vector<std::int64_t>(frac.a.data(), frac.a.data() + frac.a.size())},
                   {"q", frac.q},
                   {"t", t_list},
                   {"mode", label},
                   {"offset", std::vector<double>(offset.data(), offset.data() + offset.size())}};
  std::vector<double> xs, ys;
  for (double t : t_list) {
    RealVector shift(offset.size());
    for (Eigen::Index i = 0; i < shift.size(); ++i)
      shift[i] = 0.5 * offset[i] * std::pow(t, -cfg.gamma.order(static_cast<std::size_t>(i)));
    const Frequency xi = Frequency::from_fraction(frac) + Frequency::real(shift);
    const double err = approximation_error(frac, xi, t, mode, cfg, region, kernel, 1.0);
    report.series.push_back({t, err, label});
    xs.push_back(t);
    ys.push_back(err);
  }
  try {
    report.fits.push_back(fit_power_law("approximation error against t", xs, ys));
  } catch (const ParameterError&) {
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Rademacher-Menshov

ExperimentReport run_rm_check(const std::vector<double>& ps, int m_max, int trials, std::uint64_t seed) {
  const auto start = Clock::now();
  if (m_max < 1 || m_max > 6) throw ParameterError("Rademacher-Menshov check requires 1 <= m <= 6");
  if (trials < 1 || ps.empty()) throw ParameterError("need trials >= 1 and at least one p");
  ExperimentReport report;
  report.experiment = "rm_check";
  report.seed = seed;
  report.params = {{"p", ps}, {"m_max", m_max}, {"trials", trials}, {"bound", std::sqrt(2.0)}};
  auto record = [&](const std::vector<Signal>& family, int k, double x, const std::string& tag) {
    for (double p : ps)
      for (SeminormMode mode : {SeminormMode::jump, SeminormMode::oscillation}) {
        const auto rm = rademacher_menshov_check(family, p, k, mode);
        const double ratio = rm.rhs > 0 ? rm.lhs / rm.rhs : (rm.lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        std::ostringstream label;
        label << tag << (mode == SeminormMode::jump ? " jump" : " oscillation") << " p=" << p;
        report.series.push_back({x, ratio, label.str()});
      }
  };
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m_max));
    const std::size_t top = std::size_t{1} << m;
    const int k = static_cast<int>(rng() % top);
    std::vector<Signal> family;
    for (std::size_t n = 0; n <= top; ++n) family.push_back(random_signal(1, 3, 2, 2.0, rng));
    record(family, k, trial, "random");
  }
  const std::size_t top = std::size_t{1} << m_max;
  std::vector<Signal> alternating;
  for (std::size_t n = 0; n <= top; ++n) alternating.push_back(Signal::delta((IntVector(1) << static_cast<std::int64_t>(n % 2)).finished()));
  record(alternating, 0, -1, "adversarial");
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// multiplier / operator equivalence

ExperimentReport run_multiplier_equivalence(const LatticeConfig& cfg, const Region& region, double t, int trials,
                                            std::uint64_t seed, const CZKernel* kernel, std::int64_t radius) {
  const auto start = Clock::now();
  if (trials < 1) throw ParameterError("trials must be positive");
  ExperimentReport report;
  report.experiment = "multiplier_equivalence";
  report.seed = seed;
  report.params = {{"cfg", cfg_to_json(cfg)}, {"t", t}, {"trials", trials}, {"radius", radius},
                   {"kernel", kernel ? kernel->name() : std::string("none")}};
  const int dims = static_cast<int>(cfg.gamma.size());
  const DiscreteMultiplier avg = DiscreteMultiplier::average(t, cfg, region);
  std::optional<DiscreteMultiplier> cot;
  if (kernel) cot = DiscreteMultiplier::cotlar(t, *kernel, cfg, region);
  auto deviation = [](const Signal& direct, const Signal& fourier) {
    const double scale = std::max(direct.norm(std::numeric_limits<double>::infinity()), 1e-300);
    return Signal::max_difference(direct, fourier) / scale;
  };
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const Signal f = random_signal(dims, 6, radius, 2.0, rng);
    const IntVector r = avg.radius();
    const Signal direct = apply_stencil(avg.stencil(), f);
    const Signal fourier = apply_multiplier(f, sample_symbol(avg, choose_periods(f, r)), r);
    report.series.push_back({static_cast<double>(trial), deviation(direct, fourier), "average"});
    if (cot) {
      const IntVector rc = cot->radius();
      const Signal d2 = apply_stencil(cot->stencil(), f);
      const Signal f2 = apply_multiplier(f, sample_symbol(*cot, choose_periods(f, rc)), rc);
      report.series.push_back({static_cast<double>(trial), deviation(d2, f2), "cotlar"});
    }
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// telescoping

ExperimentReport run_telescoping(const ParameterPlan& plan, const GammaSet& gamma, std::int64_t j_max,
                                 int frequencies, std::uint64_t seed, const std::vector<TelescopingCase>& cases,
                                 std::int64_t n_max, int delta_frequencies) {
  const auto start = Clock::now();
  if (j_max < 1 || frequencies < 1) throw ParameterError("telescoping needs j_max >= 1 and frequencies >= 1");
  ExperimentReport report;
  report.experiment = "telescoping";
  report.seed = seed;
  report.params = {{"plan", plan_to_json(plan)}, {"gamma", gamma_to_json(gamma)}, {"j_max", j_max},
                   {"frequencies", frequencies}, {"n_max", n_max}, {"delta_frequencies", delta_frequencies}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> torus(-0.5, 0.5), unit(-1.0, 1.0);
  const auto dims = static_cast<Eigen::Index>(gamma.size());

  std::map<std::int64_t, FractionSet> annuli, balls;
  auto annulus = [&](std::int64_t s) -> const FractionSet& {
    auto it = annuli.find(s);
    if (it == annuli.end()) it = annuli.emplace(s, fractions_annulus(s, plan.u, gamma)).first;
    return it->second;
  };
  auto ball = [&](std::int64_t s) -> const FractionSet& {
    auto it = balls.find(s);
    if (it == balls.end()) it = balls.emplace(s, fractions_leq(s, gamma)).first;
    return it->second;
  };

  for (int sample = 0; sample < frequencies; ++sample) {
    double worst = 0, largest = 0;
    const bool near = sample % 2 == 1;
    for (std::int64_t j = 1; j <= j_max; ++j) {
      const auto levels = annulus_levels_upto(j, plan);
      RealVector xi(dims);
      if (near && !levels.empty()) {
        // A random fraction of the top level, displaced inside its bump box.
        const auto& pool = ball(levels.back()).members;
        const auto& f = pool[rng() % pool.size()];
        const double n = std::pow(static_cast<double>(j), plan.tau);
        for (Eigen::Index i = 0; i < dims; ++i)
          xi[i] = static_cast<double>(f.a[i]) / static_cast<double>(f.q) +
                  unit(rng) * bump_support_radius(n, plan.chi, gamma.order(static_cast<std::size_t>(i)), gamma.size());
      } else {
        for (Eigen::Index i = 0; i < dims; ++i) xi[i] = torus(rng);
      }
      const Frequency freq = Frequency::real(xi);
      double lhs = 0;
      for (std::int64_t s : levels) lhs += annuli_multiplier(j, annulus(s), plan, gamma, freq);
      const double rhs = levels.empty() ? 0.0 : annuli_multiplier(j, ball(levels.back()), plan, gamma, freq);
      worst = std::max(worst, std::abs(lhs - rhs));
      largest = std::max(largest, rhs);
    }
    report.series.push_back({static_cast<double>(sample), worst, "xi deviation"});
    report.series.push_back({static_cast<double>(sample), largest, "xi value"});
  }

  const Region region = Region::ball(1);
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& tc = cases[c];
    const CompositeContext ctx{plan, tc.cfg, region, tc.theta, tc.kernel, {}};
    const std::int64_t s = std::int64_t{1} << plan.u;
    const std::int64_t first = plan.large_scale_start(s);
    const auto cdims = static_cast<Eigen::Index>(tc.cfg.gamma.size());
    const std::string label = "delta deviation case " + std::to_string(c);
    for (int sample = 0; sample < delta_frequencies; ++sample) {
      RealVector xi(cdims);
      for (Eigen::Index i = 0; i < cdims; ++i) xi[i] = torus(rng);
      const Frequency freq = Frequency::real(xi);
      auto theta = [&](std::int64_t idx) {
        return continuous_multiplier(xi, static_cast<double>(scale_sequence(idx, plan.tau)), tc.theta, tc.cfg.gamma,
                                     region, tc.kernel);
      };
      double worst = 0;
      Complex sum = 0;
      for (std::int64_t n = first; n <= n_max; ++n) {
        sum += theta(n) - theta(n - 1);
        const Complex delta = composite_multiplier(CompositeVariant::Delta, n, s, ctx, freq);
        worst = std::max(worst, std::abs(delta - sum));
      }
      report.series.push_back({static_cast<double>(sample), worst, label});
    }
    report.params["cases"].push_back({{"cfg", cfg_to_json(tc.cfg)},
                                      {"theta", tc.theta == ContinuousMode::phi ? "phi" : "psi"},
                                      {"kernel", tc.kernel ? tc.kernel->name() : std::string("none")},
                                      {"first_index", first}});
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Ionescu-Wainger family

ExperimentReport run_iw_family(std::int64_t n_max, std::int64_t lcm_max) {
  const auto start = Clock::now();
  if (n_max < 1 || lcm_max < 1 || lcm_max > 80) throw ParameterError("iw family needs n_max >= 1, 1 <= lcm_max <= 80");
  ExperimentReport report;
  report.experiment = "iw_family";
  report.params = {{"n_max", n_max}, {"lcm_max", lcm_max}, {"P", "P_{<=N} = {1, ..., N}"}};
  std::vector<std::int64_t> previous;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const auto set = build_P_leq(n);
    const auto x = static_cast<double>(n);
    bool inclusion = true;
    for (std::int64_t m = 1; m <= n; ++m) inclusion = inclusion && std::binary_search(set.begin(), set.end(), m);
    const bool monotone = std::includes(set.begin(), set.end(), previous.begin(), previous.end());
    bool closed = true;
    for (std::int64_t q : set)
      for (std::int64_t d = 1; d <= q; ++d)
        if (q % d == 0) closed = closed && std::binary_search(set.begin(), set.end(), d);
    report.series.push_back({x, inclusion ? 1.0 : 0.0, "inclusion"});
    report.series.push_back({x, monotone ? 1.0 : 0.0, "monotone"});
    report.series.push_back({x, closed ? 1.0 : 0.0, "factor closed"});
    if (n <= lcm_max) {
      const auto l = lcm_of(set);
      report.series.push_back({x, l <= power_of_three(static_cast<int>(n)) ? 1.0 : 0.0, "lcm bound"});
      report.series.push_back({x, std::log(static_cast<double>(l)) / (x * std::log(3.0)), "lcm log ratio"});
    }
    previous = set;
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// kernels

ExperimentReport run_kernel_validation(int samples, std::uint64_t seed) {
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "kernel_validation";
  report.seed = seed;
  report.params = {{"samples", samples}, {"inner", {0.5, 1.0}}, {"outer", {2.0, 4.0}}, {"region", "ball"},
                   {"size_bound", 2.0}, {"lipschitz_bound", 2.0}, {"cancellation_bound", 1e-6}};
  const std::vector<std::pair<int, int>> kernels = {{1, 0}, {2, 0}, {2, 1}};
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const auto [k, j] = kernels[i];
    const CZKernel kernel = CZKernel::riesz(k, j);
    const KernelReport r = validate_kernel(kernel, Region::ball(k), samples, seed + i);
    const auto x = static_cast<double>(i);
    report.series.push_back({x, r.size_statistic, kernel.name() + " size"});
    report.series.push_back({x, r.lipschitz_statistic, kernel.name() + " lipschitz"});
    report.series.push_back({x, r.cancellation_max, kernel.name() + " cancellation"});
  }
  report.verdicts = evaluate_verdicts(report);
  report.duration_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------

void merge_report(ExperimentReport& into, const ExperimentReport& part, const std::string& prefix) {
  if (into.experiment.empty()) into.experiment = part.experiment;
  for (auto p : part.series) {
    p.label = prefix + " " + p.label;
    into.series.push_back(std::move(p));
  }
  for (auto f : part.fits) {
    f.name = prefix + " " + f.name;
    into.fits.push_back(std::move(f));
  }
  into.params["parts"][prefix] = part.params;
  into.duration_seconds += part.duration_seconds;
}

namespace {

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

bool starts_with(const std::string& s, const std::string& head) { return s.rfind(head, 0) == 0; }

bool gamma_is(const nlohmann::json& cfg, int k, int k_prime, const nlohmann::json& gamma) {
  return cfg.value("k", 0) == k && cfg.value("k_prime", -1) == k_prime && cfg.at("gamma") == gamma;
}

}  // namespace

std::vector<Verdict> evaluate_verdicts(const ExperimentReport& r) {
  std::vector<Verdict> out;
  const auto& e = r.experiment;
  if (e == "jump_boundedness") {
    std::map<std::string, std::vector<double>> by_seed;
    for (const auto& p : r.series) by_seed[p.label].push_back(p.y);
    double worst = 0;
    bool ok = !by_seed.empty();
    for (const auto& [label, ys] : by_seed) {
      const double med = median(ys);
      const double top = *std::max_element(ys.begin(), ys.end());
      const double stat = med > 0 ? top / med : (top > 0 ? std::numeric_limits<double>::infinity() : 1.0);
      worst = std::max(worst, stat);
      ok = ok && ys.size() >= 2;
    }
    out.push_back({"11", ok && worst <= 2.0, 2.0, worst});
  } else if (e == "gauss_decay") {
    const auto& cfg = r.params.at("cfg");
    if (gamma_is(cfg, 1, 0, nlohmann::json::parse("[[2]]"))) {
      double dev = 0;
      std::vector<double> xs, ys;
      for (const auto& p : r.series) {
        const auto q = static_cast<std::int64_t>(p.x);
        if (q % 2 == 0) continue;
        dev = std::max(dev, std::abs(p.y - 1.0 / std::sqrt(p.x)));
        if (p.label == "max" && q >= 3) {
          xs.push_back(p.x);
          ys.push_back(p.y);
        }
      }
      out.push_back({"3", dev <= 1e-9, 1e-9, dev});
      double slope_dev = std::numeric_limits<double>::infinity();
      if (xs.size() >= 2) slope_dev = std::abs(fit_power_law("", xs, ys).exponent + 0.5);
      out.push_back({"3", slope_dev <= 0.02, 0.02, slope_dev});
    } else if (gamma_is(cfg, 1, 1, nlohmann::json::parse("[[1]]"))) {
      double dev = 0;
      for (const auto& p : r.series) {
        const auto q = static_cast<std::int64_t>(p.x);
        const double expect = std::abs(mobius(q)) / static_cast<double>(euler_totient(q));
        dev = std::max(dev, std::abs(p.y - expect));
      }
      out.push_back({"4", dev <= 1e-12, 1e-12, dev});
    }
  } else if (e == "weyl_decay") {
    const auto pts = r.labelled("convergent");
    if (pts.size() >= 2) {
      const double ratio = pts.back().y / pts.front().y;
      out.push_back({"10", ratio <= 0.5, 0.5, ratio});
    }
  } else if (e == "sw_decay") {
    std::map<std::string, std::vector<SeriesPoint>> classes;
    for (const auto& p : r.series) classes[p.label].push_back(p);
    double last = 0;
    int inversions = 0;
    for (auto& [label, pts] : classes) {
      std::sort(pts.begin(), pts.end(), [](const SeriesPoint& a, const SeriesPoint& b) { return a.x < b.x; });
      last = std::max(last, pts.back().y);
      int inv = 0;
      for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].y > pts[i - 1].y) ++inv;
      inversions = std::max(inversions, inv);
    }
    out.push_back({"9", last <= 0.05, 0.05, last});
    out.push_back({"9", inversions <= 1, 1.0, static_cast<double>(inversions)});
  } else if (e == "rm_check") {
    double worst = 0;
    for (const auto& p : r.series) worst = std::max(worst, p.y);
    out.push_back({"8", worst <= std::sqrt(2.0) + 1e-12, std::sqrt(2.0), worst});
  } else if (e == "multiplier_equivalence") {
    double worst = 0;
    for (const auto& p : r.series) worst = std::max(worst, p.y);
    out.push_back({"5", worst <= 1e-9, 1e-9, worst});
  } else if (e == "telescoping") {
    double xi = 0, delta = 0;
    for (const auto& p : r.series) {
      if (p.label == "xi deviation") xi = std::max(xi, p.y);
      if (starts_with(p.label, "delta deviation")) delta = std::max(delta, p.y);
    }
    out.push_back({"6", xi <= 1e-12, 1e-12, xi});
    out.push_back({"6", delta <= 1e-10, 1e-10, delta});
  } else if (e == "iw_family") {
    double worst = 1;
    for (const auto& p : r.series)
      if (p.label != "lcm log ratio") worst = std::min(worst, p.y);
    out.push_back({"7", worst == 1.0, 0.0, 1.0 - worst});
  } else if (e == "kernel_validation") {
    double size = 0, lip = 0, cancel = 0;
    for (const auto& p : r.series) {
      if (ends_with(p.label, " size")) size = std::max(size, p.y);
      if (ends_with(p.label, " lipschitz")) lip = std::max(lip, p.y);
      if (ends_with(p.label, " cancellation")) cancel = std::max(cancel, p.y);
    }
    out.push_back({"12", size <= 2.0, 2.0, size});
    out.push_back({"12", lip <= 2.0, 2.0, lip});
    out.push_back({"12", cancel <= 1e-6, 1e-6, cancel});
  }
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "jump_boundedness", "short_variation", "gauss_decay", "ramanujan",        "weyl_decay",
      "sw_decay",         "approx_decay",    "rm_check",    "multiplier_equivalence", "telescoping",
      "iw_family",        "kernel_validation"};
  return names;
}

static ParameterPlan default_plan(const GammaSet& gamma, double tau) {
  return ParameterPlan::make(2.0, 3.0, tau, 0.05, 2.5 / tau, 0.4, 1, ParameterPlan::default_delta(gamma), gamma);
}

ExperimentReport default_experiment(const std::string& name, std::uint64_t seed) {
  const GammaSet linear = gamma_from(1, {{1}});
  const GammaSet square = gamma_from(1, {{2}});
  const GammaSet both = gamma_from(1, {{1}, {2}});
  if (name == "jump_boundedness") {
    const auto cfg = LatticeConfig::make(1, 0, both);
    return run_jump_boundedness(cfg, Region::ball(1), default_plan(both, 0.4), 2.0, 20, 64, seed);
  }
  if (name == "short_variation")
    return run_short_variation(LatticeConfig::make(1, 0, linear), Region::ball(1), 0.5, 4, 20);
  if (name == "gauss_decay") return run_gauss_decay(LatticeConfig::make(1, 0, square), 499, true);
  if (name == "ramanujan") return run_gauss_decay(LatticeConfig::make(0, 1, linear), 200, false);
  if (name == "weyl_decay") return run_weyl_decay(0.0, {1e3, 1e4, 1e5, 1e6});
  if (name == "sw_decay") return run_sw_decay(4, {1e3, 1e4, 1e5, 1e6});
  if (name == "approx_decay")
    return run_approx_decay(LatticeConfig::make(1, 0, both), Region::ball(1),
                            ReducedFraction::make((IntVector(2) << 1, 1).finished(), 3), {8, 16, 32, 64, 128, 256},
                            MultiplierMode::average, seed);
  if (name == "rm_check") return run_rm_check({1.5, 2.0, 3.0}, 3, 200, seed);
  if (name == "multiplier_equivalence") {
    static const CZKernel hilbert = CZKernel::riesz(1, 0);
    static const CZKernel riesz2 = CZKernel::riesz(2, 0);
    ExperimentReport out;
    const auto start = Clock::now();
    merge_report(out, run_multiplier_equivalence(LatticeConfig::make(1, 0, both), Region::ball(1), 50, 30, seed,
                                                 &hilbert),
                 "Z deg2 t=50");
    merge_report(out, run_multiplier_equivalence(LatticeConfig::make(0, 1, both), Region::ball(1), 50, 30, seed + 1,
                                                 &hilbert),
                 "P deg2 t=50");
    merge_report(out, run_multiplier_equivalence(LatticeConfig::make(2, 0, build_gamma(2, 1)), Region::ball(2), 20,
                                                 30, seed + 2, &riesz2),
                 "Z2 deg1 t=20");
    merge_report(out, run_multiplier_equivalence(LatticeConfig::make(1, 1, build_gamma(2, 2)), Region::ball(2), 3, 10,
                                                 seed + 3, &riesz2, 2),
                 "ZxP deg2 t=3");
    out.seed = seed;
    out.verdicts = evaluate_verdicts(out);
    out.duration_seconds = seconds_since(start);
    return out;
  }
  if (name == "telescoping") {
    static const CZKernel hilbert = CZKernel::riesz(1, 0);
    std::vector<TelescopingCase> cases = {{LatticeConfig::make(1, 0, linear), ContinuousMode::phi, nullptr},
                                          {LatticeConfig::make(1, 0, square), ContinuousMode::phi, nullptr},
                                          {LatticeConfig::make(1, 0, both), ContinuousMode::phi, nullptr},
                                          {LatticeConfig::make(1, 0, both), ContinuousMode::psi, &hilbert}};
    return run_telescoping(default_plan(both, 0.49), both, 20, 1000, seed, cases, 12, 8);
  }
  if (name == "iw_family") return run_iw_family(100, 60);
  if (name == "kernel_validation") return run_kernel_validation(4000, seed);
  throw ParameterError("unknown experiment '" + name + "'");
}

std::vector<ExperimentReport> run_experiments(const std::vector<std::string>& names, std::uint64_t seed, int threads) {
  std::vector<ExperimentReport> out(names.size());
  std::vector<std::exception_ptr> errors(names.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) {
      try {
        out[i] = default_experiment(names[i], seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(names.size(), 1))));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace ergo
