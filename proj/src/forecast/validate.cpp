#include "cycleauth/errors.hpp"
#include "cycleauth/forecast/events.hpp"
#include "cycleauth/forecast/seasonality.hpp"
#include "cycleauth/forecast/timeseries.hpp"

#include <cmath>

namespace cycleauth::forecast {

void TimeSeries::validate() const {
  if (t.size() != y.size()) throw DataError("time and value lengths differ");
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw DataError("non-finite sample at index " + std::to_string(i));
    if (i > 0 && !(t[i] > t[i - 1])) throw DataError("time must be strictly increasing (index " + std::to_string(i) + ")");
  }
}

void SeasonalityParams::validate() const {
  if (!(period > 0.0)) throw DataError("seasonality period must be positive");
  if (order < 1) throw DataError("seasonality order must be >= 1");
  if (coeffs.size() != 2 * order) throw DataError("seasonality needs 2 * order coefficients");
  if (!(prior_scale > 0.0)) throw DataError("seasonality prior scale must be positive");
}

void EventTerm::validate() const {
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto &w = windows[i];
    if (!(w.start <= w.end)) throw DataError("event window start after end");
    if (!std::isfinite(w.effect)) throw DataError("non-finite event effect");
    if (i > 0 && !(w.start > windows[i - 1].end)) throw DataError("event windows overlap or are unordered");
  }
}

} // namespace cycleauth::forecast
