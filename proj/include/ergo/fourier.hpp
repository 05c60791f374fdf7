#pragma once

#include "ergo/expsums.hpp"
#include "ergo/signal.hpp"

#include <functional>

namespace ergo {

using Symbol = std::function<Complex(const Frequency&)>;

/// Symbol sampled at the grid frequencies j/P (componentwise), stored
/// row-major with the last axis fastest.
struct SymbolGrid {
  IntVector periods;
  std::vector<Complex> values;
};

/// Generic sampling; every grid frequency is passed as an exact rational.
SymbolGrid sample_symbol(const Symbol& m, const IntVector& periods);
/// Fast path for trigonometric polynomials: phases come from one table of
/// e(r / lcm(P)) indexed by exact integer residues.
SymbolGrid sample_symbol(const DiscreteMultiplier& m, const IntVector& periods);

/// Smallest power of two per axis exceeding twice (signal diameter + radius).
IntVector choose_periods(const Signal& f, const IntVector& operator_radius);

/// T[m] f = int e(-xi . x) m(xi) F f(xi) dxi on the torus grid. The window is
/// centred on the support of f; throws PeriodTooSmallError when a period
/// cannot hold the support plus the operator radius or when output mass
/// appears outside [min - R, max + R].
Signal apply_multiplier(const Signal& f, const SymbolGrid& m, const IntVector& operator_radius,
                        double wrap_tolerance = 1e-10);
Signal apply_multiplier(const Signal& f, const Symbol& m, const IntVector& operator_radius,
                        double wrap_tolerance = 1e-10);

}  // namespace ergo
