#pragma once

#include <cmath>
#include <cstddef>

namespace ctxrec {

/// Exponent of a power law fitted to aggregated check-in frequencies.
struct PowerLawExponent {
  double value = 0.0;
  bool degenerate = false;  // every frequency was zero; scores are 0
  double log_sum = 0.0;     // sum of ln(1 + f) over all (user, POI) pairs
};

/// 1 + pairs / log_sum, degenerate when log_sum == 0.
inline PowerLawExponent power_law_exponent(double log_sum, double pairs) {
  if (!(log_sum > 0.0)) return {0.0, true, 0.0};
  return {1.0 + pairs / log_sum, false, log_sum};
}

/// Cumulative power-law score 1 - (1 + x)^(1 - exponent), in [0, 1).
inline double power_law_cdf(double x, double exponent) {
  return 1.0 - std::pow(1.0 + x, 1.0 - exponent);
}

}  // namespace ctxrec
