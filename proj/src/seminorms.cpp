#include "ergo/seminorms.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>

namespace ergo {

SampledCurve::SampledCurve(std::vector<double> t, std::vector<Complex> v) : times(std::move(t)), values(std::move(v)) {
  if (times.size() != values.size()) throw ParameterError("curve times and values differ in length");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ParameterError("curve times must be strictly increasing");
}

SampledCurve SampledCurve::indexed(std::vector<Complex> values) {
  std::vector<double> t(values.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  return SampledCurve(std::move(t), std::move(values));
}

double variation(const SampledCurve& curve, double r) {
  if (!(r >= 1)) throw ParameterError("variation requires r >= 1");
  const auto& v = curve.values;
  std::vector<double> best(v.size(), 0.0);
  double top = 0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) best[j] = std::max(best[j], best[i] + std::pow(std::abs(v[j] - v[i]), r));
    top = std::max(top, best[j]);
  }
  return std::pow(top, 1.0 / r);
}

std::int64_t jump_count(const SampledCurve& curve, double lambda) {
  if (!(lambda > 0)) throw ParameterError("jump_count requires lambda > 0");
  const auto& v = curve.values;
  std::vector<std::int64_t> chain(v.size(), 0);
  std::int64_t top = 0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i)
      if (std::abs(v[j] - v[i]) >= lambda) chain[j] = std::max(chain[j], chain[i] + 1);
    top = std::max(top, chain[j]);
  }
  return top;
}

std::vector<double> jump_breakpoints(const std::vector<Complex>& raw) {
  // Runs of equal values never help a selection with positive increments.
  std::vector<Complex> v;
  for (const auto& x : raw)
    if (v.empty() || v.back() != x) v.push_back(x);
  const std::size_t n = v.size();
  std::vector<double> out;
  if (n < 2) return out;
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = std::abs(v[j] - v[i]);
  // level[j]: best bottleneck over selections ending at j with L increments.
  std::vector<double> level(n, std::numeric_limits<double>::infinity()), next(n);
  for (std::size_t jumps = 1; jumps < n; ++jumps) {
    double best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] = -1;
      for (std::size_t i = 0; i < j; ++i)
        if (level[i] > 0) next[j] = std::max(next[j], std::min(level[i], dist[i * n + j]));
      best = std::max(best, next[j]);
    }
    if (!(best > 0)) break;
    out.push_back(best);
    level.swap(next);
  }
  return out;
}

double jump_functional(const std::vector<Complex>& values) {
  double best = 0;
  auto b = jump_breakpoints(values);
  for (std::size_t l = 0; l < b.size(); ++l) best = std::max(best, b[l] * std::sqrt(static_cast<double>(l + 1)));
  return best;
}

double jump_functional(const SampledCurve& curve) { return jump_functional(curve.values); }

double oscillation(const SampledCurve& curve, const std::vector<double>& seq) {
  if (seq.size() < 2) throw ParameterError("oscillation needs a sequence of at least two points");
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (!(seq[i] > seq[i - 1])) throw ParameterError("oscillation sequence must be strictly increasing");
  const auto& t = curve.times;
  const auto& v = curve.values;
  double total = 0;
  for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
    auto anchor_it = std::upper_bound(t.begin(), t.end(), seq[j]);
    if (anchor_it == t.begin()) continue;  // f is undefined before the first sample
    const Complex anchor = v[static_cast<std::size_t>(anchor_it - t.begin()) - 1];
    double cell = 0;
    for (auto it = std::lower_bound(t.begin(), t.end(), seq[j]); it != t.end() && *it < seq[j + 1]; ++it)
      cell = std::max(cell, std::norm(v[static_cast<std::size_t>(it - t.begin())] - anchor));
    total += cell;
  }
  return std::sqrt(total);
}

PointCurves family_curves(const std::vector<double>& times, const std::vector<Signal>& family) {
  if (family.empty()) throw ParameterError("empty signal family");
  if (times.size() != family.size()) throw ParameterError("family and time grid differ in length");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ParameterError("time grid must be strictly increasing");
  std::map<IntVector, std::vector<Complex>, LexLess> by_point;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (const auto& [x, v] : family[i]) {
      auto [it, inserted] = by_point.try_emplace(x, family.size(), Complex{});
      it->second[i] = v;
    }
  PointCurves out;
  out.times = times;
  for (auto& [x, c] : by_point) {
    out.curves.push_back(std::move(c));
    out.multiplicity.push_back(1.0);
  }
  return out;
}

namespace {

double lp_sum(const PointCurves& c, const std::vector<double>& per_curve, double p) {
  CompensatedSum s;
  for (std::size_t i = 0; i < per_curve.size(); ++i) s.add(c.multiplicity[i] * std::pow(per_curve[i], p));
  return static_cast<double>(std::pow(s.value(), 1.0L / p));
}

SeminormResult jump_mode(const PointCurves& c, double p) {
  struct Event {
    double lambda;
    std::size_t curve;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < c.curves.size(); ++i)
    for (double b : jump_breakpoints(c.curves[i])) events.push_back({b, i});
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.lambda > b.lambda; });
  std::vector<std::int64_t> count(c.curves.size(), 0);
  long double sum = 0;  // sum of mult * N^{p/2}
  double best = 0;
  for (std::size_t e = 0; e < events.size();) {
    const double lambda = events[e].lambda;
    for (; e < events.size() && events[e].lambda == lambda; ++e) {
      std::size_t i = events[e].curve;
      auto n = static_cast<long double>(count[i]);
      sum += c.multiplicity[i] * (std::pow(n + 1, p / 2) - std::pow(n, p / 2));
      ++count[i];
    }
    best = std::max(best, lambda * static_cast<double>(std::pow(sum, 1.0L / p)));
  }
  return {best, true, 0};
}

double oscillation_norm(const PointCurves& c, const std::vector<std::size_t>& picks, double p) {
  std::vector<double> per(c.curves.size(), 0.0);
  for (std::size_t i = 0; i < c.curves.size(); ++i) {
    const auto& v = c.curves[i];
    double total = 0;
    for (std::size_t j = 0; j + 1 < picks.size(); ++j) {
      double cell = 0;
      for (std::size_t t = picks[j]; t < picks[j + 1]; ++t) cell = std::max(cell, std::norm(v[t] - v[picks[j]]));
      total += cell;
    }
    per[i] = std::sqrt(total);
  }
  return lp_sum(c, per, p);
}

SeminormResult oscillation_mode(const PointCurves& c, double p, const SeminormOptions& opt) {
  const std::size_t n = c.times.size();
  SeminormResult result;
  std::vector<std::size_t> picks;
  if (n < 2) return result;
  if (n <= opt.exhaustive_limit) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (__builtin_popcountll(mask) < 2) continue;
      picks.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) picks.push_back(i);
      result.value = std::max(result.value, oscillation_norm(c, picks, p));
      ++result.sequences;
    }
    return result;
  }
  result.exact = false;
  std::mt19937_64 rng(opt.seed);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::uniform_int_distribution<std::size_t> length(2, n);
  for (std::size_t s = 0; s < opt.random_sequences; ++s) {
    picks.clear();
    std::sample(all.begin(), all.end(), std::back_inserter(picks), length(rng), rng);
    result.value = std::max(result.value, oscillation_norm(c, picks, p));
    ++result.sequences;
  }
  return result;
}

}  // namespace

SeminormResult seminorm_S_p(const PointCurves& curves, double p, SeminormMode mode, const SeminormOptions& opt) {
  if (!(p > 1) || std::isinf(p)) throw ParameterError("seminorm requires p in (1, inf)");
  if (curves.times.empty()) throw ParameterError("empty signal family");
  for (const auto& c : curves.curves)
    if (c.size() != curves.times.size()) throw ParameterError("curve length differs from the time grid");
  return mode == SeminormMode::jump ? jump_mode(curves, p) : oscillation_mode(curves, p, opt);
}

SeminormResult seminorm_S_p(const std::vector<double>& times, const std::vector<Signal>& family, double p,
                            SeminormMode mode, const SeminormOptions& opt) {
  return seminorm_S_p(family_curves(times, family), p, mode, opt);
}

double pointwise_jump_norm(const PointCurves& curves, double p) {
  std::vector<double> per;
  per.reserve(curves.curves.size());
  for (const auto& c : curves.curves) per.push_back(jump_functional(c));
  return lp_sum(curves, per, p);
}

RademacherMenshov rademacher_menshov_check(const std::vector<Signal>& family, double p, int k, SeminormMode mode,
                                           const SeminormOptions& opt) {
  if (family.size() < 2) throw ParameterError("Rademacher-Menshov needs f_0, ..., f_{2^m}");
  const std::size_t top = family.size() - 1;
  if (top & (top - 1)) throw ParameterError("Rademacher-Menshov family must have 2^m + 1 members");
  if (k < 0 || static_cast<std::size_t>(k) >= top) throw ParameterError("Rademacher-Menshov requires 0 <= k < 2^m");
  int m = 0;
  while ((std::size_t{1} << m) < top) ++m;

  std::vector<double> times;
  std::vector<Signal> range;
  for (std::size_t n = static_cast<std::size_t>(k); n <= top; ++n) {
    times.push_back(static_cast<double>(n));
    range.push_back(family[n]);
  }
  PointCurves curves = family_curves(times, range);
  RademacherMenshov out;
  out.lhs = seminorm_S_p(curves, p, mode, opt).value;

  std::vector<double> per(curves.curves.size(), 0.0);
  for (std::size_t x = 0; x < curves.curves.size(); ++x) {
    const auto& v = curves.curves[x];  // v[n - k] = f_n(x)
    for (int i = 0; i <= m; ++i) {
      const std::size_t width = std::size_t{1} << i;
      double squares = 0;
      for (std::size_t j = 0; (j + 1) * width <= top; ++j) {
        std::size_t a = j * width, b = a + width;
        if (a < static_cast<std::size_t>(k)) continue;
        squares += std::norm(v[b - static_cast<std::size_t>(k)] - v[a - static_cast<std::size_t>(k)]);
      }
      per[x] += std::sqrt(squares);
    }
  }
  out.rhs = lp_sum(curves, per, p);
  return out;
}

}  // namespace ergo
