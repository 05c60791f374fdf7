#pragma once

#include "ergo/core.hpp"
#include "ergo/expsums.hpp"
#include "ergo/lattice.hpp"

#include <optional>
#include <set>
#include <vector>

namespace ergo {

/// Exponents of the circle-method bookkeeping. make() rejects every
/// violated constraint; p = 2 skips the p0 and rho constraints, which only
/// feed interpolation.
struct ParameterPlan {
  double p = 2.0;
  double p0 = 2.0;
  double tau = 0.5;
  double chi = 0.05;
  double rho = 2.5;
  double beta = 1.0;  // stands in for some beta > beta_rho; no explicit beta_rho is known
  int u = 2;
  double delta = 0.5;
  double varrho = 0.0;
  std::size_t gamma_size = 1;

  static ParameterPlan make(double p, double p0, double tau, double chi, double rho, double beta, int u, double delta,
                            const GammaSet& gamma);
  /// 1/2 when every index has order 2, otherwise 1/(2 max |gamma|).
  static double default_delta(const GammaSet& gamma);

  /// kappa_s = s^{2 floor(varrho)}; varrho < 1 makes this 1 for every s.
  double kappa(std::int64_t s) const;
  /// First index of the large-scale sums: ceil(2^{kappa_s / tau}).
  std::int64_t large_scale_start(std::int64_t s) const;
  /// S_M = floor(2^{M^tau - 3 M^{tau chi}}).
  std::int64_t S_M(std::int64_t m) const;
  /// J_s = floor(2^{2^{kappa_s} - 3 * 2^{kappa_s chi}}).
  std::int64_t J_s(std::int64_t s) const;
};

/// P_{<=N} = {1, ..., N}.
std::vector<std::int64_t> build_P_leq(std::int64_t n);
/// lcm of a set of positive integers; throws OverflowError past 128 bits.
unsigned __int128 lcm_of(const std::vector<std::int64_t>& values);
/// 3^n as a 128-bit integer; throws OverflowError when n > 80.
unsigned __int128 power_of_three(int n);

struct FractionLess {
  bool operator()(const ReducedFraction& a, const ReducedFraction& b) const {
    if (a.q != b.q) return a.q < b.q;
    return LexLess{}(a.a, b.a);
  }
};

struct FractionSet {
  std::vector<ReducedFraction> members;  // ordered by (q, a)
  bool contains(const ReducedFraction& f) const;
  std::size_t size() const { return members.size(); }
};

/// Sigma_{<=N}: a/q with q in P_{<=N}, a in [1, q]^Gamma, gcd(a, q) = 1.
FractionSet fractions_leq(std::int64_t n, const GammaSet& gamma, std::size_t cap = 4'000'000);
/// Sigma_s for s in 2^{uN}.
FractionSet fractions_annulus(std::int64_t s, int u, const GammaSet& gamma, std::size_t cap = 4'000'000);
/// True when s = 2^{u m} for some m >= 1.
bool is_annulus_level(std::int64_t s, int u);
/// F(t) = max{s in 2^{uN} : s <= t}; nullopt when t < 2^u.
std::optional<std::int64_t> annulus_floor(double t, int u);

/// eta(x): 1 for |x|_inf <= 1/(32|Gamma|), 0 for |x|_inf >= 1/(16|Gamma|),
/// smooth step built from exp(-1/t) in between.
double bump_eta(const RealVector& x);

enum class BumpVariant { standard, tilde };
/// eta_N(xi) = eta(2^{N A - N^chi Id} xi); the tilde variant is eta_N(xi / 2).
double bump_eta_scaled(double n, double chi, const RealVector& xi, const GammaSet& gamma,
                       BumpVariant variant = BumpVariant::standard);
/// Half-width along gamma of the support box of eta_N.
double bump_support_radius(double n, double chi, int order, std::size_t gamma_size,
                           BumpVariant variant = BumpVariant::standard);

/// N_n = floor(2^{n^tau}); N_0 = 1.
std::int64_t scale_sequence(std::int64_t n, double tau);

/// Torus representative of xi - a/q in [-1/2, 1/2)^Gamma.
RealVector torus_offset(const Frequency& xi, const ReducedFraction& frac);

/// Xi_j^s(xi) over a precomputed Sigma_s.
double annuli_multiplier(std::int64_t j, const FractionSet& sigma, const ParameterPlan& plan, const GammaSet& gamma,
                         const Frequency& xi);
/// Xi_j^s(xi) for s in 2^{uN}.
double annuli_multiplier(std::int64_t j, std::int64_t s, const ParameterPlan& plan, const GammaSet& gamma,
                         const Frequency& xi);
/// Xi_{<= j^{tau u}}(xi): sum over Sigma_{<= F(j^{tau u})}; 0 when j^{tau u} < 2^u.
double annuli_multiplier_leq(std::int64_t j, const ParameterPlan& plan, const GammaSet& gamma, const Frequency& xi);
/// Levels s in 2^{uN} with s <= j^{tau u}.
std::vector<std::int64_t> annulus_levels_upto(std::int64_t j, const ParameterPlan& plan);

enum class CompositeVariant { v, Lambda, w, Pi, omega, Delta };

struct CompositeContext {
  const ParameterPlan& plan;
  const LatticeConfig& cfg;
  const Region& region;
  ContinuousMode theta = ContinuousMode::phi;
  const CZKernel* kernel = nullptr;
  QuadratureOptions quadrature{};
};

/// Pointwise value of v_j^s, Lambda_j^s (index = j), w^s, Pi^s (index
/// ignored), omega_n^s, Delta_n^s (index = n).
Complex composite_multiplier(CompositeVariant variant, std::int64_t index, std::int64_t s, const CompositeContext& ctx,
                             const Frequency& xi);

struct SupportReport {
  std::int64_t s = 0;
  double kappa = 0.0;
  std::string q_s;               // decimal, may exceed 64 bits
  bool lcm_bound_ok = false;     // Q_s <= 3^s
  bool divides_full_lcm = false; // Q_s | lcm(P_{<=s})
  bool separation_holds = false; // 2^{-2^kappa + 2^{kappa chi}} <= 1/(4 Q_s)
  bool support_checked = false;  // equals separation_holds
  bool support_ok = false;       // eta_{2^kappa} support inside 1/(4 Q_s)
};

SupportReport support_radius_check(const ParameterPlan& plan, std::int64_t s, const GammaSet& gamma);

struct DisjointnessReport {
  std::size_t fractions = 0;
  std::size_t overlapping_pairs = 0;
  double min_separation = 0.0;  // smallest max-norm torus distance between distinct fractions
  double support_radius = 0.0;  // largest half-width of the eta_{j^tau} box
  /// 2 * support_radius < F(j^{tau u})^{-2}, the separation any two distinct
  /// fractions of the set are guaranteed.
  bool arithmetic_holds = false;
  bool disjoint() const { return overlapping_pairs == 0; }
};

/// Pairwise disjointness of the eta_{j^tau} support boxes around Sigma_{<= F(j^{tau u})}.
DisjointnessReport bump_disjointness(std::int64_t j, const ParameterPlan& plan, const GammaSet& gamma);

std::string to_decimal(unsigned __int128 v);

}  // namespace ergo
