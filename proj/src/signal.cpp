#include "ergo/signal.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace ergo {

Signal Signal::delta(int dimension) { return delta(IntVector::Zero(dimension)); }

Signal Signal::delta(const IntVector& at) {
  Signal f(static_cast<int>(at.size()));
  f.set(at, 1.0);
  return f;
}

void Signal::check(const IntVector& x) const {
  if (x.size() != dim_) throw ParameterError("signal point has wrong dimension");
}

void Signal::add(const IntVector& x, Complex v) {
  check(x);
  auto [it, inserted] = values_.try_emplace(x, v);
  if (!inserted) it->second += v;
}

void Signal::set(const IntVector& x, Complex v) {
  check(x);
  values_[x] = v;
}

Complex Signal::value(const IntVector& x) const {
  check(x);
  auto it = values_.find(x);
  return it == values_.end() ? Complex{} : it->second;
}

Signal& Signal::prune(double tolerance) {
  std::erase_if(values_, [&](const auto& kv) { return std::abs(kv.second) <= tolerance; });
  return *this;
}

double Signal::norm(double p) const {
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& [x, v] : values_) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1)) throw ParameterError("l^p norm requires p >= 1");
  CompensatedSum s;
  for (const auto& [x, v] : values_) s.add(std::pow(static_cast<long double>(std::abs(v)), p));
  return static_cast<double>(std::pow(s.value(), 1.0L / p));
}

Signal Signal::translated(const IntVector& v) const {
  check(v);
  Signal out(dim_);
  for (const auto& [x, val] : values_) out.values_.emplace_hint(out.values_.end(), x + v, val);
  return out;
}

Signal Signal::abs() const {
  Signal out(dim_);
  for (const auto& [x, v] : values_) out.values_.emplace_hint(out.values_.end(), x, std::abs(v));
  return out;
}

Signal Signal::conjugate() const {
  Signal out(dim_);
  for (const auto& [x, v] : values_) out.values_.emplace_hint(out.values_.end(), x, std::conj(v));
  return out;
}

Signal& Signal::operator+=(const Signal& other) {
  if (dim_ == 0) dim_ = other.dim_;
  if (other.dim_ != dim_ && !other.empty()) throw ParameterError("signal dimension mismatch");
  for (const auto& [x, v] : other.values_) add(x, v);
  return *this;
}

Signal& Signal::operator*=(Complex scale) {
  for (auto& [x, v] : values_) v *= scale;
  return *this;
}

std::pair<IntVector, IntVector> Signal::bounding_box() const {
  if (values_.empty()) throw ParameterError("bounding box of an empty signal");
  IntVector lo = values_.begin()->first, hi = lo;
  for (const auto& [x, v] : values_) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  return {lo, hi};
}

double Signal::max_difference(const Signal& f, const Signal& g) {
  double m = 0;
  for (const auto& [x, v] : f.values_) m = std::max(m, std::abs(v - g.value(x)));
  for (const auto& [x, v] : g.values_)
    if (!f.values_.count(x)) m = std::max(m, std::abs(v));
  return m;
}

Signal random_signal(int dimension, int count, std::int64_t radius, double p, std::mt19937_64& rng) {
  if (count < 1) throw ParameterError("random signal needs at least one point");
  long double box = 1;
  for (int i = 0; i < dimension; ++i) box *= static_cast<long double>(2 * radius + 1);
  if (box < count) throw ParameterError("random signal: box too small for the requested support");
  std::uniform_int_distribution<std::int64_t> coord(-radius, radius);
  std::normal_distribution<double> gauss;
  std::set<IntVector, LexLess> chosen;
  while (static_cast<int>(chosen.size()) < count) {
    IntVector x(dimension);
    for (int i = 0; i < dimension; ++i) x[i] = coord(rng);
    chosen.insert(x);
  }
  Signal f(dimension);
  for (const auto& x : chosen) {
    double re = gauss(rng), im = gauss(rng);
    f.set(x, Complex(re, im));
  }
  f.prune();
  return (1.0 / f.norm(p)) * f;
}

Signal read_signal(std::istream& in, int dimension) {
  Signal f(dimension);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    IntVector x(dimension);
    double re = 0, im = 0;
    for (int i = 0; i < dimension; ++i)
      if (!(fields >> x[i])) throw ParameterError("signal file line " + std::to_string(line_no) + ": bad coordinate");
    if (!(fields >> re >> im)) throw ParameterError("signal file line " + std::to_string(line_no) + ": bad value");
    std::string rest;
    if (fields >> rest) throw ParameterError("signal file line " + std::to_string(line_no) + ": trailing fields");
    f.add(x, Complex(re, im));
  }
  return f.prune();
}

Signal read_signal_file(const std::string& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open signal file " + path);
  return read_signal(in, dimension);
}

void write_signal(std::ostream& out, const Signal& f) {
  out << std::setprecision(17);
  for (const auto& [x, v] : f) {
    for (Eigen::Index i = 0; i < x.size(); ++i) out << x[i] << ' ';
    out << v.real() << ' ' << v.imag() << '\n';
  }
}

}  // namespace ergo
