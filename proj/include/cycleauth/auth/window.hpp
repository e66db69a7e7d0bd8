#pragma once

#include "cycleauth/activity.hpp"
#include "cycleauth/forecast/timeseries.hpp"
#include "cycleauth/io/recording.hpp"

#include <Eigen/Core>

#include <array>

namespace cycleauth::auth {

/// Three aligned axis series of one activity.
struct ActivityWindow {
  Activity label = Activity::unknown;
  std::array<forecast::TimeSeries, 3> axes;

  std::size_t size() const { return std::size_t(axes[0].t.size()); }
  /// Throws DataError unless all axes share length and time stamps.
  void validate() const;

  /// Samples [begin, end) of a recording, time stamps are sample indices.
  static ActivityWindow from_recording(const io::Recording &rec, std::size_t begin, std::size_t end);
};

inline constexpr int kFeaturesPerAxis = 7;
inline constexpr int kFeatureCount = 3 * kFeaturesPerAxis;

/// Per axis: mean, std, min, max, dominant period, peak-to-peak, mean |slope|.
/// Throws TooShort below 4 samples.
Eigen::VectorXd extract_features(const ActivityWindow &w);

} // namespace cycleauth::auth
