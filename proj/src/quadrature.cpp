#include "ergo/quadrature.hpp"

#include <array>
#include <queue>

namespace ergo {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kNodes[1], kNodes[3], kNodes[5], kNodes[7].
constexpr std::array<double, 4> kGauss = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const LineIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Complex fc = f(c);
  Complex k = kKronrod[7] * fc, g = kGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    Complex s = f(c - h * kNodes[i]) + f(c + h * kNodes[i]);
    k += kKronrod[i] * s;
    if (i % 2 == 1) g += kGauss[i / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

double tolerance(const QuadratureOptions& opt, Complex value) {
  return std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
}

QuadratureResult adaptive(const LineIntegrand& f, const std::vector<double>& breaks, const QuadratureOptions& opt,
                          long& evaluations) {
  std::priority_queue<Segment> open;
  std::vector<Segment> settled;
  Complex total{};
  double error = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Segment s = kronrod(f, breaks[i], breaks[i + 1]);
    evaluations += 15;
    total += s.value;
    error += s.error;
    open.push(s);
  }
  const double span = breaks.empty() ? 0.0 : breaks.back() - breaks.front();
  while (!open.empty() && error > tolerance(opt, total)) {
    if (evaluations > opt.max_evaluations) {
      throw QuadratureError("adaptive quadrature exhausted its evaluation budget (error estimate " +
                                std::to_string(error) + ")",
                            error);
    }
    Segment worst = open.top();
    open.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a < 1e-14 * span || mid <= worst.a || mid >= worst.b) {
      settled.push_back(worst);  // cannot be refined further in double precision
      continue;
    }
    Segment left = kronrod(f, worst.a, mid), right = kronrod(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
  }
  // Re-sum from scratch to shed drift from the incremental updates.
  Complex sum{};
  double err = 0;
  for (; !open.empty(); open.pop()) {
    sum += open.top().value;
    err += open.top().error;
  }
  for (const auto& s : settled) {
    sum += s.value;
    err += s.error;
  }
  return {sum, err, evaluations};
}

}  // namespace

QuadratureResult integrate_interval(const LineIntegrand& f, double a, double b, const QuadratureOptions& opt) {
  long evaluations = 0;
  if (a == b) return {};
  if (a > b) {
    auto r = adaptive(f, {b, a}, opt, evaluations);
    r.value = -r.value;
    return r;
  }
  return adaptive(f, {a, b}, opt, evaluations);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  if (n < 1) throw ParameterError("Gauss-Legendre rule needs n >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Eigen::VectorXd nodes = solver.eigenvalues();
  Eigen::VectorXd weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
  return {nodes, weights};
}

namespace {

QuadratureResult integrate_line_region(const FieldIntegrand& f, const Region& region, double inner, double outer,
                                       const QuadratureOptions& opt) {
  long evaluations = 0;
  Complex total{};
  double error = 0;
  for (double sign : {-1.0, 1.0}) {
    RealVector dir = RealVector::Constant(1, sign);
    double rho = region.radial_extent(dir);
    auto g = [&](double r) { return f(RealVector::Constant(1, sign * r)); };
    auto part = adaptive(g, {inner * rho, outer * rho}, opt, evaluations);
    total += part.value;
    error += part.error;
  }
  return {total, error, evaluations};
}

QuadratureResult integrate_plane_region(const FieldIntegrand& f, const Region& region, double inner, double outer,
                                        const QuadratureOptions& opt) {
  long evaluations = 0;
  QuadratureOptions inner_opt = opt;
  inner_opt.rel_tol = opt.rel_tol * 0.1;
  inner_opt.abs_tol = opt.abs_tol * 0.01;
  auto radial = [&](double theta) {
    RealVector u(2);
    u << std::cos(theta), std::sin(theta);
    double rho = region.radial_extent(u);
    auto g = [&](double r) { return f(r * u) * r; };
    return adaptive(g, {inner * rho, outer * rho}, inner_opt, evaluations).value;
  };
  // Breakpoints at multiples of pi/4 catch the corners of the built-in cube.
  std::vector<double> breaks;
  for (int i = 0; i <= 8; ++i) breaks.push_back(i * std::numbers::pi / 4);
  auto r = adaptive(radial, breaks, opt, evaluations);
  r.evaluations = evaluations;
  return r;
}

QuadratureResult integrate_tensor_region(const FieldIntegrand& f, const Region& region, double inner, double outer,
                                         const QuadratureOptions& opt) {
  const int k = region.dimension();
  long evaluations = 0;
  auto rule = [&](int n) {
    auto [nodes, weights] = gauss_legendre(n);
    Complex total{};
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    RealVector x(k);
    while (true) {
      double w = 1;
      for (int c = 0; c < k; ++c) {
        x[c] = outer * nodes[idx[static_cast<std::size_t>(c)]];
        w *= outer * weights[idx[static_cast<std::size_t>(c)]];
      }
      if (region.contains(outer, x) && !(inner > 0 && region.contains(inner, x))) total += w * f(x);
      ++evaluations;
      int c = 0;
      while (c < k && ++idx[static_cast<std::size_t>(c)] == n) idx[static_cast<std::size_t>(c++)] = 0;
      if (c == k) break;
    }
    return total;
  };
  Complex previous = rule(8);
  for (int n = 16; n <= 128; n *= 2) {
    Complex current = rule(n);
    double diff = std::abs(current - previous);
    if (diff <= tolerance(opt, current)) return {current, diff, evaluations};
    if (evaluations > opt.max_evaluations) throw QuadratureError("tensor quadrature did not converge", diff);
    previous = current;
  }
  throw QuadratureError("tensor quadrature did not converge", std::abs(previous));
}

}  // namespace

QuadratureResult integrate_region(const FieldIntegrand& f, const Region& region, double inner, double outer,
                                  const QuadratureOptions& opt) {
  if (!(outer > 0) || inner < 0 || inner > outer) throw ParameterError("integrate_region requires 0 <= inner <= outer");
  switch (region.dimension()) {
    case 1:
      return integrate_line_region(f, region, inner, outer, opt);
    case 2:
      return integrate_plane_region(f, region, inner, outer, opt);
    default:
      return integrate_tensor_region(f, region, inner, outer, opt);
  }
}

double region_measure(const Region& region, double t) {
  if (!(t > 0)) throw ParameterError("region_measure requires t > 0");
  if (region.kind() != Region::Kind::custom) return region.unit_volume() * std::pow(t, region.dimension());
  return integrate_region([](const RealVector&) { return Complex(1.0); }, region, 0.0, t).value.real();
}

}  // namespace ergo
