#pragma once

#include "cycleauth/forecast/model.hpp"
#include "cycleauth/forecast/timeseries.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cycleauth::eval {

struct BlockMetrics {
  std::size_t block = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double coverage = 0.0;
};

struct MetricReport {
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  /// Fraction of truth values inside [lower, upper].
  double coverage = 0.0;
  std::size_t count = 0;
  std::vector<BlockMetrics> blocks;
};

/// Throws LengthMismatch when truth and band differ in length.
MetricReport metrics(std::span<const double> truth, const forecast::PredictionBand &band);
MetricReport metrics(const forecast::TimeSeries &truth, const forecast::PredictionBand &band);

/// Pools per-block reports weighted by their sample counts; keeps the block list.
MetricReport pool(const std::vector<BlockMetrics> &blocks, const std::vector<std::size_t> &counts);

} // namespace cycleauth::eval
