#pragma once

#include "ergo/core.hpp"
#include "ergo/lattice.hpp"
#include "ergo/quadrature.hpp"
#include "ergo/signal.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace ergo {

/// Real-coefficient polynomial R on R^k, stored without its constant term.
class RealPolynomial {
 public:
  struct Term {
    double coefficient;
    MultiIndex exponents;
  };

  explicit RealPolynomial(int k) : k_(k) {}
  RealPolynomial(int k, std::vector<Term> terms, int max_degree = 32);

  int dimension() const { return k_; }
  int degree() const;
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// R(x) modulo 1, each monomial reduced separately in extended precision.
  long double phase(const IntVector& x) const;

 private:
  int k_;
  std::vector<Term> terms_;
};

struct KernelConstants {
  double size = 2.0;
  double lipschitz = 2.0;
  double cancellation_tolerance = 1e-6;
};

/// Real Calderon-Zygmund kernel on R^k \ {0}.
class CZKernel {
 public:
  using Evaluator = std::function<double(const RealVector&)>;

  CZKernel(int k, Evaluator eval, KernelConstants claimed = {}, std::string name = "custom");

  /// c_k x_j / |x|^{k+1} with c_k = Gamma((k+1)/2) / pi^{(k+1)/2}, the
  /// normalization of the Riesz transforms (1/(pi x) for k = 1).
  static CZKernel riesz(int k, int j);
  /// Omega0(x/|x|) / |x|^k; Omega0 must have mean zero over the sphere.
  static CZKernel homogeneous(int k, std::function<double(const RealVector&)> omega0, KernelConstants claimed = {});

  int dimension() const { return k_; }
  const std::string& name() const { return name_; }
  const KernelConstants& claimed() const { return claimed_; }
  /// Throws DomainError at the origin.
  double operator()(const RealVector& x) const;

 private:
  int k_;
  Evaluator eval_;
  KernelConstants claimed_;
  std::string name_;
};

struct KernelAnnulus {
  double inner;
  double outer;
  double integral;
};

struct KernelReport {
  double size_statistic = 0.0;
  double lipschitz_statistic = 0.0;
  double cancellation_max = 0.0;
  std::vector<KernelAnnulus> annuli;
  bool size_ok = false;
  bool lipschitz_ok = false;
  bool cancellation_ok = false;
  bool pass() const { return size_ok && lipschitz_ok && cancellation_ok; }
};

/// Sampled size and Lipschitz statistics plus quadrature of K over
/// Omega_R \ Omega_r for every pair r in `inner`, R in `outer`.
KernelReport validate_kernel(const CZKernel& kernel, const Region& region, int samples, std::uint64_t seed,
                             const std::vector<double>& inner = {0.5, 1.0},
                             const std::vector<double>& outer = {2.0, 4.0});

/// Convolution stencil: (Op f)(x) = sum over taps of weight * f(x - shift).
struct Stencil {
  int dimension = 0;
  std::vector<std::pair<IntVector, Complex>> taps;  // lexicographic in shift, merged
  double normalizer = 1.0;                          // theta_Omega(t) for averages
};

Signal apply_stencil(const Stencil& stencil, const Signal& f);

Stencil average_stencil(double t, const LatticeConfig& cfg, const Region& region, const IntegerPolynomialMap& pmap,
                        const PrimeTable* table = nullptr);
Stencil cotlar_stencil(double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region,
                       const IntegerPolynomialMap& pmap, const PrimeTable* table = nullptr);
Stencil twisted_stencil(double t, const RealPolynomial& twist, const LatticeConfig& cfg, const Region& region,
                        const IntegerPolynomialMap& pmap, const PrimeTable* table = nullptr);

/// A_t f. Throws EmptyAverageError when theta_Omega(t) = 0.
Signal average_A(const Signal& f, double t, const LatticeConfig& cfg, const Region& region,
                 const IntegerPolynomialMap& pmap);
Signal average_A(const Signal& f, double t, const LatticeConfig& cfg, const Region& region);

/// H_t f with the origin lattice point excluded.
Signal cotlar_H(const Signal& f, double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region,
                const IntegerPolynomialMap& pmap);
Signal cotlar_H(const Signal& f, double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region);

/// A_t f with every term multiplied by e(R(n, p)).
Signal twisted_average(const Signal& f, double t, const RealPolynomial& twist, const LatticeConfig& cfg,
                       const Region& region, const IntegerPolynomialMap& pmap);
Signal twisted_average(const Signal& f, double t, const RealPolynomial& twist, const LatticeConfig& cfg,
                       const Region& region);

/// sum over Omega_t of |K(n, p)| * weight, the l^1 operator bound of H_t.
double cotlar_l1_bound(double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region);

}  // namespace ergo
