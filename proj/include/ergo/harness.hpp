#pragma once

#include "ergo/circle.hpp"
#include "ergo/expsums.hpp"
#include "ergo/operators.hpp"
#include "ergo/report.hpp"
#include "ergo/seminorms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ergo {

nlohmann::json plan_to_json(const ParameterPlan& plan);
nlohmann::json gamma_to_json(const GammaSet& gamma);

struct JumpOptions {
  double t0 = 1.0;
  double ratio = 1.189207115002721;  // 2^{1/4}
  int support = 16;                  // random support size
  std::int64_t radius = 8;           // support box radius
  bool delta = false;                // use f = delta_0 instead of a random signal
};

/// ||sup_lambda lambda N_lambda^{1/2}(A_t f(x) : t in grid)||_p / ||f||_p for
/// geometric grids t_i = t0 ratio^i of 8, 16, ..., `scales` points (each a
/// prefix of the next), one random unit-norm f per trial.
ExperimentReport run_jump_boundedness(const LatticeConfig& cfg, const Region& region, const ParameterPlan& plan,
                                      double p, int trials, int scales, std::uint64_t seed,
                                      const JumpOptions& opt = {});

/// ||V^1(A_t delta_0 : t in [N_n, N_{n+1}))||_1 on the grid N_n + i / density
/// and its ratio to n^{tau - 1}.
ExperimentReport run_short_variation(const LatticeConfig& cfg, const Region& region, double tau, std::int64_t n_lo,
                                     std::int64_t n_hi, int density = 4);

/// max and min over a in A_q of |G(a/q)| for q <= q_max.
ExperimentReport run_gauss_decay(const LatticeConfig& cfg, std::int64_t q_max, bool odd_only);

/// Normalized |Weyl sum| over |n| < N for Q(n) = (n, n^2), xi = (xi1, xi2);
/// the "convergent" series takes xi2 = the convergent of sqrt(2) - 1 with the
/// largest denominator <= N, the "fixed" series xi2 = sqrt(2) - 1.
ExperimentReport run_weyl_decay(double xi1, const std::vector<double>& n_list);

/// |theta(x; q, r) - x/phi(q)| / (x/phi(q)) for q <= q_max and every unit r.
ExperimentReport run_sw_decay(std::int64_t q_max, const std::vector<double>& x_list);

/// |y_t(xi) - G(a/q) Theta_t(xi - a/q)| at xi = a/q + (offset_gamma t^{-|gamma|}).
ExperimentReport run_approx_decay(const LatticeConfig& cfg, const Region& region, const ReducedFraction& frac,
                                  const std::vector<double>& t_list, MultiplierMode mode, std::uint64_t seed,
                                  const CZKernel* kernel = nullptr);

/// lhs / rhs of the Rademacher-Menshov inequality over random families with
/// m drawn from [1, m_max], for every p and both seminorm modes, plus an
/// alternating-delta family.
ExperimentReport run_rm_check(const std::vector<double>& ps, int m_max, int trials, std::uint64_t seed);

/// Relative sup deviation between the Fourier path and the direct stencil
/// for A_t (and H_t when a kernel is given).
ExperimentReport run_multiplier_equivalence(const LatticeConfig& cfg, const Region& region, double t, int trials,
                                            std::uint64_t seed, const CZKernel* kernel = nullptr,
                                            std::int64_t radius = 4);

struct TelescopingCase {
  LatticeConfig cfg;
  ContinuousMode theta = ContinuousMode::phi;
  const CZKernel* kernel = nullptr;
};

/// Sum_s Xi_j^s against Xi_{<= j^{tau u}} on random frequencies (half of them
/// placed inside a bump box), and Delta_n^s against the sum of consecutive
/// Theta differences for every case.
ExperimentReport run_telescoping(const ParameterPlan& plan, const GammaSet& gamma, std::int64_t j_max,
                                 int frequencies, std::uint64_t seed, const std::vector<TelescopingCase>& cases,
                                 std::int64_t n_max, int delta_frequencies);

/// Properties (i)-(iii) of P_{<=N} for N <= n_max and lcm(P_{<=N}) <= 3^N for N <= lcm_max.
ExperimentReport run_iw_family(std::int64_t n_max, std::int64_t lcm_max);

/// Riesz kernels for k = 1, 2 on the unit ball.
ExperimentReport run_kernel_validation(int samples, std::uint64_t seed);

/// Appends the series, fits and parameters of `part`, prefixing its labels.
void merge_report(ExperimentReport& into, const ExperimentReport& part, const std::string& prefix);

/// Verdicts recomputed from the stored series and parameters only.
std::vector<Verdict> evaluate_verdicts(const ExperimentReport& report);

/// Names accepted by default_experiment.
const std::vector<std::string>& experiment_names();
/// The desk-scale configuration of a named experiment.
ExperimentReport default_experiment(const std::string& name, std::uint64_t seed);
/// Runs several experiments on up to `threads` threads; results keep the input order.
std::vector<ExperimentReport> run_experiments(const std::vector<std::string>& names, std::uint64_t seed,
                                              int threads);

}  // namespace ergo
