#include "cycleauth/auth/window.hpp"

#include "cycleauth/errors.hpp"
#include "cycleauth/forecast/period.hpp"

#include <cmath>

namespace cycleauth::auth {

void ActivityWindow::validate() const {
  for (const auto &a : axes) a.validate();
  for (int i = 1; i < 3; ++i)
    if (axes[std::size_t(i)].t.size() != axes[0].t.size() || axes[std::size_t(i)].t != axes[0].t)
      throw DataError("window axes are not aligned");
}

ActivityWindow ActivityWindow::from_recording(const io::Recording &rec, std::size_t begin, std::size_t end) {
  ActivityWindow w;
  w.label = rec.label;
  for (int a = 0; a < 3; ++a) w.axes[std::size_t(a)] = rec.axis_series(a, begin, end);
  return w;
}

Eigen::VectorXd extract_features(const ActivityWindow &w) {
  w.validate();
  const auto n = Eigen::Index(w.size());
  if (n < 4) throw TooShort("feature extraction needs at least 4 samples");
  Eigen::VectorXd f(kFeatureCount);
  const Eigen::VectorXd &t = w.axes[0].t;
  for (int a = 0; a < 3; ++a) {
    const Eigen::VectorXd &y = w.axes[std::size_t(a)].y;
    const double mean = y.mean();
    const double sd = std::sqrt((y.array() - mean).square().mean());
    const double lo = y.minCoeff(), hi = y.maxCoeff();
    const auto est = forecast::estimate_period(std::span<const double>(y.data(), std::size_t(n)), 2.0, double(n) / 2.0);
    double slope = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) slope += std::abs((y[i] - y[i - 1]) / (t[i] - t[i - 1]));
    slope /= double(n - 1);
    f.segment<kFeaturesPerAxis>(a * kFeaturesPerAxis) << mean, sd, lo, hi, est.period, hi - lo, slope;
  }
  return f;
}

} // namespace cycleauth::auth
