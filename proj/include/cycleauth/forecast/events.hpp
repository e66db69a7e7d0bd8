#pragma once

#include <vector>

namespace cycleauth::forecast {

/// Indicator-window effect: adds `effect` for start <= t <= end.
struct EventWindow {
  double start = 0.0;
  double end = 0.0;
  double effect = 0.0;

  bool contains(double t) const { return t >= start && t <= end; }
};

struct EventTerm {
  std::vector<EventWindow> windows;

  bool empty() const { return windows.empty(); }
  /// Throws DataError unless windows are ordered, non-overlapping and start <= end.
  void validate() const;
};

inline double eval_events(const EventTerm &e, double t) {
  double sum = 0.0;
  for (const auto &w : e.windows)
    if (w.contains(t)) sum += w.effect;
  return sum;
}

} // namespace cycleauth::forecast
