#pragma once

#include "ergo/core.hpp"
#include "ergo/lattice.hpp"

#include <functional>

namespace ergo {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  long max_evaluations = 4'000'000;
};

struct QuadratureResult {
  Complex value;
  double error = 0.0;
  long evaluations = 0;
};

using LineIntegrand = std::function<Complex(double)>;
using FieldIntegrand = std::function<Complex(const RealVector&)>;

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Throws QuadratureError
/// carrying the achieved estimate when the evaluation budget runs out.
QuadratureResult integrate_interval(const LineIntegrand& f, double a, double b, const QuadratureOptions& opt = {});

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]
/// (Golub-Welsch: eigen-decomposition of the Jacobi matrix).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

/// Integral of f over Omega_{outer} minus the closure of Omega_{inner}
/// (inner = 0 integrates over all of Omega_{outer}). k = 1 and k = 2 use
/// nested adaptive rules in (polar) coordinates adapted to the region; k >= 3
/// uses masked tensor Gauss-Legendre with refinement.
QuadratureResult integrate_region(const FieldIntegrand& f, const Region& region, double inner, double outer,
                                  const QuadratureOptions& opt = {});

/// |Omega_t|.
double region_measure(const Region& region, double t);

}  // namespace ergo
