#pragma once

#include <cmath>

namespace dunklsb {

/// Pochhammer symbol (a)_m = a (a+1) ... (a+m-1), (a)_0 = 1.
inline double rising_factorial(double a, unsigned m) {
  double r = 1.0;
  for (unsigned i = 0; i < m; ++i) r *= a + i;
  return r;
}

/// log (a)_m for a > 0, via log-gamma.
inline double log_rising_factorial(double a, unsigned m) {
  return std::lgamma(a + m) - std::lgamma(a);
}

}  // namespace dunklsb
