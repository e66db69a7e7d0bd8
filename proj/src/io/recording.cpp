#include "cycleauth/io/recording.hpp"

#include "cycleauth/errors.hpp"

#include <cmath>

namespace cycleauth::io {

forecast::TimeSeries Recording::axis_series(int axis, std::size_t begin, std::size_t end) const {
  const auto &v = axes.at(std::size_t(axis));
  if (begin > end || end > v.size()) throw DataError("sample range outside the recording");
  forecast::TimeSeries ts;
  ts.t.resize(Eigen::Index(end - begin));
  ts.y.resize(Eigen::Index(end - begin));
  for (std::size_t i = begin; i < end; ++i) {
    ts.t[Eigen::Index(i - begin)] = double(i);
    ts.y[Eigen::Index(i - begin)] = v[i];
  }
  return ts;
}

void Recording::validate() const {
  if (axes[0].size() != axes[1].size() || axes[0].size() != axes[2].size())
    throw DataError("recording axes have different lengths");
  if (!(sample_rate_hz > 0.0)) throw DataError("sample rate must be positive");
}

} // namespace cycleauth::io
