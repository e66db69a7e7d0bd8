#pragma once

#include <span>

namespace cycleauth::forecast {

struct PeriodEstimate {
  /// Period in samples.
  double period = 0.0;
  /// Peak DFT bin power over total power in the searched band; 0 for a flat signal.
  double score = 0.0;
  /// Raw spectral peak before the autocorrelation harmonic check.
  double spectral_period = 0.0;
  /// Multiple of the spectral peak chosen by the autocorrelation check.
  int harmonic = 1;
};

/// Dominant period of uniformly sampled values within [p_min, p_max] samples.
/// Requires p_min >= 2 and p_max <= n / 2.
PeriodEstimate estimate_period(std::span<const double> values, double p_min, double p_max);

} // namespace cycleauth::forecast
