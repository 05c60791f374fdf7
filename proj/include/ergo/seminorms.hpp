#pragma once

#include "ergo/core.hpp"
#include "ergo/signal.hpp"

#include <cstdint>
#include <vector>

namespace ergo {

/// Finite map t -> f(t) with strictly increasing times.
struct SampledCurve {
  std::vector<double> times;
  std::vector<Complex> values;

  SampledCurve() = default;
  SampledCurve(std::vector<double> times, std::vector<Complex> values);
  /// Times 0, 1, ..., n-1.
  static SampledCurve indexed(std::vector<Complex> values);
  std::size_t size() const { return values.size(); }
};

/// V^r: sup over increasing selections of (sum |increments|^r)^{1/r}.
double variation(const SampledCurve& curve, double r);

/// N_lambda: longest selection whose consecutive increments are all >= lambda.
std::int64_t jump_count(const SampledCurve& curve, double lambda);

/// B_1 >= B_2 >= ...: B_L is the largest lambda with N_lambda >= L, so that
/// N_lambda = #{L : B_L >= lambda}. Empty for curves without a nonzero increment.
std::vector<double> jump_breakpoints(const std::vector<Complex>& values);

/// sup_lambda lambda N_lambda^{1/2} = max_L B_L sqrt(L).
double jump_functional(const SampledCurve& curve);
double jump_functional(const std::vector<Complex>& values);

/// O_{I,N} with I = (I_1, ..., I_{N+1}) and cells I_j <= t < I_{j+1}. f(I_j)
/// is read at the last curve time <= I_j.
double oscillation(const SampledCurve& curve, const std::vector<double>& sequence);

/// Per-point curves of a signal family: one value vector per lattice point
/// (aligned with the family's time grid) with a multiplicity, so identical
/// curves can be stored once.
struct PointCurves {
  std::vector<double> times;
  std::vector<std::vector<Complex>> curves;
  std::vector<double> multiplicity;
};

/// Curves of (f_t(x) : t in grid) for every x in the union of the supports.
PointCurves family_curves(const std::vector<double>& times, const std::vector<Signal>& family);

enum class SeminormMode { oscillation, jump };

struct SeminormOptions {
  /// Grids up to this many points are searched exhaustively in oscillation mode.
  std::size_t exhaustive_limit = 12;
  std::size_t random_sequences = 2000;
  std::uint64_t seed = 1;
};

struct SeminormResult {
  double value = 0.0;
  bool exact = true;            // false: randomized lower bound
  std::size_t sequences = 0;    // oscillation sequences examined
};

/// S^p over the family: jump mode gives sup_lambda ||lambda N_lambda^{1/2}||_p,
/// oscillation mode gives sup_I ||O_{I,N}||_p over sequences drawn from the grid.
SeminormResult seminorm_S_p(const PointCurves& curves, double p, SeminormMode mode, const SeminormOptions& opt = {});
SeminormResult seminorm_S_p(const std::vector<double>& times, const std::vector<Signal>& family, double p,
                            SeminormMode mode, const SeminormOptions& opt = {});

/// || sup_lambda lambda N_lambda^{1/2} ||_p with the supremum taken pointwise.
double pointwise_jump_norm(const PointCurves& curves, double p);

struct RademacherMenshov {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// family[n] = f_n for n = 0, ..., 2^m. lhs is S^p over k <= n <= 2^m; rhs is
/// the l^p norm of sum_i (sum_j |f_{u_{j+1}} - f_{u_j}|^2)^{1/2} over dyadic
/// intervals [j 2^i, (j+1) 2^i) contained in [k, 2^m].
RademacherMenshov rademacher_menshov_check(const std::vector<Signal>& family, double p, int k, SeminormMode mode,
                                           const SeminormOptions& opt = {});

}  // namespace ergo
