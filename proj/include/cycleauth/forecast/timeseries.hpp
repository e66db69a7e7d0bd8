#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace cycleauth::forecast {

/// One axis of one recording: strictly increasing sample times and finite values.
struct TimeSeries {
  Eigen::VectorXd t;
  Eigen::VectorXd y;

  TimeSeries() = default;
  TimeSeries(Eigen::VectorXd times, Eigen::VectorXd values) : t(std::move(times)), y(std::move(values)) {}

  /// Series with t = 0, 1, ..., n-1.
  static TimeSeries indexed(const Eigen::VectorXd &values) {
    return {Eigen::VectorXd::LinSpaced(values.size(), 0.0, double(values.size() - 1)), values};
  }

  std::size_t size() const { return static_cast<std::size_t>(y.size()); }

  /// Throws DataError on length mismatch, non-increasing t or non-finite values.
  void validate() const;
};

} // namespace cycleauth::forecast
