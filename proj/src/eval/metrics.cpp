#include "cycleauth/eval/metrics.hpp"

#include "cycleauth/errors.hpp"

#include <cmath>

namespace cycleauth::eval {

MetricReport metrics(std::span<const double> truth, const forecast::PredictionBand &band) {
  if (truth.size() != band.size())
    throw LengthMismatch("truth has " + std::to_string(truth.size()) + " values, band has " +
                         std::to_string(band.size()));
  MetricReport r;
  r.count = truth.size();
  if (r.count == 0) return r;
  double se = 0.0, ae = 0.0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = truth[i] - band.yhat[i];
    se += e * e;
    ae += std::abs(e);
    if (band.lower[i] <= truth[i] && truth[i] <= band.upper[i]) ++inside;
  }
  const double n = double(r.count);
  r.mse = se / n;
  r.rmse = std::sqrt(r.mse);
  r.mae = ae / n;
  r.coverage = double(inside) / n;
  return r;
}

MetricReport metrics(const forecast::TimeSeries &truth, const forecast::PredictionBand &band) {
  return metrics(std::span<const double>(truth.y.data(), std::size_t(truth.y.size())), band);
}

MetricReport pool(const std::vector<BlockMetrics> &blocks, const std::vector<std::size_t> &counts) {
  if (blocks.size() != counts.size()) throw LengthMismatch("one count per block is required");
  MetricReport r;
  r.blocks = blocks;
  double se = 0.0, ae = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const double n = double(counts[i]);
    se += blocks[i].mse * n;
    ae += blocks[i].mae * n;
    cov += blocks[i].coverage * n;
    r.count += counts[i];
  }
  if (r.count == 0) return r;
  r.mse = se / double(r.count);
  r.rmse = std::sqrt(r.mse);
  r.mae = ae / double(r.count);
  r.coverage = cov / double(r.count);
  return r;
}

} // namespace cycleauth::eval
