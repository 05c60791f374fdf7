#include "ergo/fourier.hpp"

#include <numeric>
#include <unsupported/Eigen/FFT>

namespace ergo {

namespace {

constexpr std::int64_t kMaxGrid = std::int64_t{1} << 25;

std::int64_t grid_size(const IntVector& periods) {
  std::int64_t n = 1;
  for (Eigen::Index i = 0; i < periods.size(); ++i) {
    if (periods[i] < 1) throw ParameterError("periods must be >= 1");
    n = checked_mul(n, periods[i]);
    if (n > kMaxGrid) throw ResourceError("multiplier grid exceeds " + std::to_string(kMaxGrid) + " points");
  }
  return n;
}

/// Applies a 1-D transform along `axis` of a row-major array.
void transform_axis(std::vector<Complex>& data, const IntVector& periods, Eigen::Index axis, bool forward,
                    Eigen::FFT<double>& fft) {
  const std::int64_t n = periods[axis];
  if (n == 1) return;
  std::int64_t stride = 1;
  for (Eigen::Index i = axis + 1; i < periods.size(); ++i) stride *= periods[i];
  const auto total = static_cast<std::int64_t>(data.size());
  const std::int64_t block = stride * n;
  std::vector<Complex> line(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  for (std::int64_t base = 0; base < total; base += block)
    for (std::int64_t offset = 0; offset < stride; ++offset) {
      for (std::int64_t j = 0; j < n; ++j) line[static_cast<std::size_t>(j)] = data[base + offset + j * stride];
      if (forward)
        fft.fwd(out, line);
      else
        fft.inv(out, line);
      for (std::int64_t j = 0; j < n; ++j) data[base + offset + j * stride] = out[static_cast<std::size_t>(j)];
    }
}

}  // namespace

SymbolGrid sample_symbol(const Symbol& m, const IntVector& periods) {
  const std::int64_t n = grid_size(periods);
  SymbolGrid grid{periods, std::vector<Complex>(static_cast<std::size_t>(n))};
  IntVector j = IntVector::Zero(periods.size());
  for (std::int64_t flat = 0; flat < n; ++flat) {
    grid.values[static_cast<std::size_t>(flat)] = m(Frequency::rational(j, periods));
    for (Eigen::Index a = periods.size() - 1; a >= 0; --a) {
      if (++j[a] < periods[a]) break;
      j[a] = 0;
    }
  }
  return grid;
}

SymbolGrid sample_symbol(const DiscreteMultiplier& m, const IntVector& periods) {
  const std::int64_t n = grid_size(periods);
  const auto dims = periods.size();
  if (dims != m.stencil().dimension) throw ParameterError("periods must be indexed by Gamma");
  std::int64_t lcm = 1;
  for (Eigen::Index a = 0; a < dims; ++a) lcm = checked_mul(lcm / std::gcd(lcm, periods[a]), periods[a]);
  if (lcm > kMaxGrid) throw ResourceError("multiplier phase table too large");
  std::vector<Complex> table(static_cast<std::size_t>(lcm));
  for (std::int64_t r = 0; r < lcm; ++r) table[static_cast<std::size_t>(r)] = unit_phase(static_cast<long double>(r) / lcm);

  SymbolGrid grid{periods, std::vector<Complex>(static_cast<std::size_t>(n))};
  const std::int64_t last = periods[dims - 1];
  std::vector<std::int64_t> step(static_cast<std::size_t>(dims));
  for (const auto& [shift, c] : m.stencil().taps) {
    // Advancing j_a by one adds z_a (L / P_a) to the phase numerator modulo L.
    for (Eigen::Index a = 0; a < dims; ++a)
      step[static_cast<std::size_t>(a)] = mul_mod(mod_floor(shift[a], periods[a]), lcm / periods[a], lcm);
    IntVector j = IntVector::Zero(dims);
    std::int64_t base = 0;
    for (std::int64_t flat = 0; flat < n; flat += last) {
      std::int64_t idx = base;
      const std::int64_t s = step[static_cast<std::size_t>(dims - 1)];
      for (std::int64_t jl = 0; jl < last; ++jl) {
        grid.values[static_cast<std::size_t>(flat + jl)] += c * table[static_cast<std::size_t>(idx)];
        idx += s;
        if (idx >= lcm) idx -= lcm;
      }
      for (Eigen::Index a = dims - 2; a >= 0; --a) {
        base = (base + step[static_cast<std::size_t>(a)]) % lcm;
        if (++j[a] < periods[a]) break;
        j[a] = 0;  // P_a * step_a is a multiple of L, so base is already back in phase
      }
    }
  }
  return grid;
}

IntVector choose_periods(const Signal& f, const IntVector& operator_radius) {
  IntVector diameter = IntVector::Zero(operator_radius.size());
  if (!f.empty()) {
    auto [lo, hi] = f.bounding_box();
    diameter = hi - lo;
  }
  IntVector periods(operator_radius.size());
  for (Eigen::Index a = 0; a < periods.size(); ++a) {
    std::int64_t need = std::max(2 * (diameter[a] + operator_radius[a]) + 1, diameter[a] + 2 * operator_radius[a] + 2);
    std::int64_t p = 1;
    while (p < need) p *= 2;
    periods[a] = p;
  }
  return periods;
}

Signal apply_multiplier(const Signal& f, const SymbolGrid& m, const IntVector& operator_radius,
                        double wrap_tolerance) {
  const IntVector& periods = m.periods;
  const auto dims = periods.size();
  if (operator_radius.size() != dims) throw ParameterError("operator radius must be indexed like the periods");
  if (f.empty()) return Signal(static_cast<int>(dims));
  if (f.dimension() != dims) throw ParameterError("signal dimension must match the symbol grid");
  const std::int64_t n = grid_size(periods);
  if (static_cast<std::int64_t>(m.values.size()) != n) throw ParameterError("symbol grid has the wrong size");

  auto [lo, hi] = f.bounding_box();
  for (Eigen::Index a = 0; a < dims; ++a)
    if (periods[a] < hi[a] - lo[a] + 2 * operator_radius[a] + 2)
      throw PeriodTooSmallError("period " + std::to_string(periods[a]) + " along axis " + std::to_string(a) +
                                " cannot hold the support plus the operator radius");
  IntVector centre = lo + (hi - lo) / 2;
  IntVector origin(dims);  // first integer point of the window on each axis
  for (Eigen::Index a = 0; a < dims; ++a) origin[a] = centre[a] - periods[a] / 2;

  auto flat_index = [&](const IntVector& x) {
    std::int64_t idx = 0;
    for (Eigen::Index a = 0; a < dims; ++a) idx = idx * periods[a] + mod_floor(x[a], periods[a]);
    return idx;
  };

  std::vector<Complex> data(static_cast<std::size_t>(n));
  for (const auto& [x, v] : f) data[static_cast<std::size_t>(flat_index(x))] += v;
  Eigen::FFT<double> fft;
  // F f(j/P) = sum f(x) e(j x / P) is P times the (1/P-scaled) inverse DFT;
  // the final forward DFT carries the matching 1/N.
  for (Eigen::Index a = 0; a < dims; ++a) transform_axis(data, periods, a, false, fft);
  for (std::int64_t i = 0; i < n; ++i) data[static_cast<std::size_t>(i)] *= m.values[static_cast<std::size_t>(i)];
  for (Eigen::Index a = 0; a < dims; ++a) transform_axis(data, periods, a, true, fft);

  double peak = 0;
  for (const auto& v : data) peak = std::max(peak, std::abs(v));
  Signal out(static_cast<int>(dims));
  if (peak == 0) return out;
  const IntVector box_lo = lo - operator_radius, box_hi = hi + operator_radius;
  IntVector residue = IntVector::Zero(dims), x(dims);
  double stray = 0;
  for (std::int64_t flat = 0; flat < n; ++flat) {
    const Complex v = data[static_cast<std::size_t>(flat)];
    if (std::abs(v) > 1e-13 * peak) {
      bool inside = true;
      for (Eigen::Index a = 0; a < dims; ++a) {
        x[a] = origin[a] + mod_floor(residue[a] - origin[a], periods[a]);
        inside = inside && x[a] >= box_lo[a] && x[a] <= box_hi[a];
      }
      if (inside)
        out.set(x, v);
      else
        stray = std::max(stray, std::abs(v));
    }
    for (Eigen::Index a = dims - 1; a >= 0; --a) {
      if (++residue[a] < periods[a]) break;
      residue[a] = 0;
    }
  }
  if (stray > wrap_tolerance * peak)
    throw PeriodTooSmallError("output mass outside the expected support (relative " + std::to_string(stray / peak) +
                              "): the period is too small or the operator radius is understated");
  return out;
}

Signal apply_multiplier(const Signal& f, const Symbol& m, const IntVector& operator_radius, double wrap_tolerance) {
  return apply_multiplier(f, sample_symbol(m, choose_periods(f, operator_radius)), operator_radius, wrap_tolerance);
}

}  // namespace ergo
