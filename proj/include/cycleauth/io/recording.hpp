#pragma once

#include "cycleauth/activity.hpp"
#include "cycleauth/forecast/timeseries.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace cycleauth::io {

/// Triaxial accelerometer recording of one subject performing one activity.
struct Recording {
  std::string subject_id;
  Activity label = Activity::unknown;
  double sample_rate_hz = 50.0;
  std::array<std::vector<double>, 3> axes;

  std::size_t size() const { return axes[0].size(); }

  /// Axis as a series indexed by sample number over [begin, end).
  forecast::TimeSeries axis_series(int axis, std::size_t begin, std::size_t end) const;
  forecast::TimeSeries axis_series(int axis) const { return axis_series(axis, 0, size()); }

  /// Throws DataError on unequal axes or non-positive rate.
  void validate() const;

  friend bool operator==(const Recording &, const Recording &) = default;
};

inline constexpr std::array<const char *, 3> kAxisNames = {"x", "y", "z"};

} // namespace cycleauth::io
