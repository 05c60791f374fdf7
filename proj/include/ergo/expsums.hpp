#pragma once

#include "ergo/core.hpp"
#include "ergo/lattice.hpp"
#include "ergo/operators.hpp"
#include "ergo/quadrature.hpp"

#include <functional>
#include <optional>

namespace ergo {

/// a/q with a in [1, q]^Gamma and gcd(a_1, ..., a_|Gamma|, q) = 1.
struct ReducedFraction {
  IntVector a;
  std::int64_t q = 1;

  /// Validates; components are first reduced into [1, q].
  static ReducedFraction make(const IntVector& a, std::int64_t q);
  static ReducedFraction zero(std::size_t size) { return {IntVector::Ones(static_cast<Eigen::Index>(size)), 1}; }
  bool operator==(const ReducedFraction& o) const { return q == o.q && a == o.a; }
};

/// Point of the torus T^Gamma. Rational frequencies keep exact numerators and
/// per-component denominators so that phases are reduced modulo 1 exactly.
class Frequency {
 public:
  Frequency() = default;
  static Frequency real(const RealVector& xi);
  static Frequency rational(const IntVector& numerators, const IntVector& denominators);
  static Frequency from_fraction(const ReducedFraction& frac);
  static Frequency zero(std::size_t size);

  std::size_t size() const { return static_cast<std::size_t>(value_.size()); }
  bool is_rational() const { return rational_; }
  /// Representative in [-1/2, 1/2)^Gamma.
  const RealVector& value() const { return value_; }
  const IntVector& numerators() const { return num_; }
  const IntVector& denominators() const { return den_; }

  /// xi . m modulo 1 for an integer vector m indexed by Gamma.
  long double phase(const IntVector& m) const;
  /// xi . Q(x) modulo 1 without forming Q(x) when xi is rational.
  long double phase_at(const IntVector& x, const GammaSet& gamma) const;

  Frequency operator-() const;
  friend Frequency operator+(const Frequency& a, const Frequency& b);
  friend Frequency operator-(const Frequency& a, const Frequency& b) { return a + (-b); }

 private:
  RealVector value_;
  IntVector num_, den_;
  bool rational_ = false;
};

/// Weight attached to a lattice point; receives the point (n, p) and its
/// log-weight prod log|p_i|.
using WeylWeight = std::function<Complex(const IntVector&, double)>;
inline Complex unit_weight(const IntVector&, double) { return 1.0; }
inline Complex log_weight(const IntVector&, double w) { return w; }

/// Sum over (n, p) in Omega_t \ Omega'_t of e(xi . Q(n, p)) phi(n, p).
Complex weyl_sum(const Frequency& xi, const WeylWeight& phi, const LatticeConfig& cfg, const Region& outer,
                 const Region* inner, double t, const PrimeTable* table = nullptr);

/// G(a/q), normalized by q^{k'} phi(q)^{k''}.
Complex gauss_sum(const ReducedFraction& frac, const LatticeConfig& cfg);

enum class MultiplierMode { average, cotlar };

/// m_t or n_t as a trigonometric polynomial over the cached stencil.
class DiscreteMultiplier {
 public:
  explicit DiscreteMultiplier(Stencil stencil) : stencil_(std::move(stencil)) {}
  static DiscreteMultiplier average(double t, const LatticeConfig& cfg, const Region& region,
                                    const PrimeTable* table = nullptr);
  static DiscreteMultiplier cotlar(double t, const CZKernel& kernel, const LatticeConfig& cfg, const Region& region,
                                   const PrimeTable* table = nullptr);

  Complex operator()(const Frequency& xi) const;
  const Stencil& stencil() const { return stencil_; }
  /// Largest |shift| along each axis of Z^Gamma (the spatial radius).
  IntVector radius() const;

 private:
  Stencil stencil_;
};

Complex discrete_multiplier(const Frequency& xi, double t, MultiplierMode mode, const LatticeConfig& cfg,
                            const Region& region, const CZKernel* kernel = nullptr);

enum class ContinuousMode { phi, psi };

/// Phi_t(xi) = |Omega_t|^{-1} int_{Omega_t} e(xi . Q(u)) du, or the principal
/// value Psi_t(xi) = p.v. int_{Omega_t} e(xi . Q(u)) K(u) du. Psi_t is
/// evaluated as int (e(xi . Q(u)) - 1) K(u) du, whose integrand is bounded,
/// plus the limit of int_{Omega_t \ Omega_eps} K extrapolated along
/// eps = t 2^{-j} (zero for kernels with exact cancellation).
Complex continuous_multiplier(const RealVector& xi, double t, ContinuousMode mode, const GammaSet& gamma,
                              const Region& region, const CZKernel* kernel = nullptr,
                              const QuadratureOptions& opt = {});

/// Theta counterpart of a discrete mode.
inline ContinuousMode counterpart(MultiplierMode m) {
  return m == MultiplierMode::average ? ContinuousMode::phi : ContinuousMode::psi;
}

/// True when |xi_gamma - a_gamma/q| <= L t^{-|gamma|} on the torus for every gamma.
bool in_major_arc(const Frequency& xi, const ReducedFraction& frac, double t, double box, const GammaSet& gamma);

/// |y_t(xi) - G(a/q) Theta_t(xi - a/q)|. Requires xi in the major-arc box.
double approximation_error(const ReducedFraction& frac, const Frequency& xi, double t, MultiplierMode mode,
                           const LatticeConfig& cfg, const Region& region, const CZKernel* kernel = nullptr,
                           double box = 1.0);

/// Consecutive-scale form: |(y_{N} - y_{N'})(xi) - G(a/q)(Theta_N - Theta_{N'})(xi - a/q)| with N' < N.
double approximation_error_scales(const ReducedFraction& frac, const Frequency& xi, double n_prev, double n_next,
                                  MultiplierMode mode, const LatticeConfig& cfg, const Region& region,
                                  const CZKernel* kernel = nullptr, double box = 1.0);

}  // namespace ergo
