#include "cycleauth/forecast/period.hpp"

#include "cycleauth/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace cycleauth::forecast {

namespace {

// |sum x_t exp(-2 pi i f t)|^2 via a rotating phasor.
double power_at(const std::vector<double> &x, double freq) {
  const std::complex<double> step = std::polar(1.0, -2 * std::numbers::pi * freq);
  std::complex<double> w{1.0, 0.0};
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t t = 0; t < x.size(); ++t) {
    acc += x[t] * w;
    w *= step;
    if ((t & 63) == 63) w = std::polar(1.0, -2 * std::numbers::pi * freq * double(t + 1));
  }
  return std::norm(acc);
}

double harmonic_power(const std::vector<double> &x, double period, int harmonics) {
  double sum = 0.0;
  for (int h = 1; h <= harmonics; ++h) sum += power_at(x, double(h) / period);
  return sum;
}

// Maximizes f over an evenly spaced grid on [lo, hi], then one parabolic step.
template <typename F> double grid_argmax(F &&f, double lo, double hi, int points) {
  if (!(hi > lo)) return lo;
  std::vector<double> v(static_cast<std::size_t>(points));
  const double h = (hi - lo) / double(points - 1);
  for (int i = 0; i < points; ++i) v[std::size_t(i)] = f(lo + h * i);
  auto best = std::size_t(std::max_element(v.begin(), v.end()) - v.begin());
  double x = lo + h * double(best);
  if (best > 0 && best + 1 < v.size()) {
    double denom = v[best - 1] - 2 * v[best] + v[best + 1];
    if (denom < 0) x += 0.5 * h * (v[best - 1] - v[best + 1]) / denom;
  }
  return x;
}

// Unbiased autocorrelation at an integer lag, normalized by the lag-0 value.
double autocorrelation(const std::vector<double> &x, std::size_t lag, double var) {
  if (lag >= x.size() || var <= 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t t = 0; t + lag < x.size(); ++t) s += x[t] * x[t + lag];
  return s / double(x.size() - lag) / var;
}

double acf_peak_near(const std::vector<double> &x, double lag, double var) {
  const double radius = std::max(2.0, 0.1 * lag);
  auto lo = std::size_t(std::max(1.0, std::floor(lag - radius)));
  auto hi = std::size_t(std::min(double(x.size() - 2), std::ceil(lag + radius)));
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t l = lo; l <= hi; ++l) best = std::max(best, autocorrelation(x, l, var));
  return best;
}

// Residual sum of squares of a least-squares Fourier fit with the given period.
double fourier_rss(const std::vector<double> &x, double period, int harmonics) {
  const auto n = Eigen::Index(x.size());
  Eigen::MatrixXd B(n, 1 + 2 * harmonics);
  for (Eigen::Index t = 0; t < n; ++t) {
    B(t, 0) = 1.0;
    for (int h = 1; h <= harmonics; ++h) {
      const double arg = 2 * std::numbers::pi * h * double(t) / period;
      B(t, 2 * h - 1) = std::cos(arg);
      B(t, 2 * h) = std::sin(arg);
    }
  }
  const Eigen::Map<const Eigen::VectorXd> y(x.data(), n);
  const Eigen::VectorXd coef = B.householderQr().solve(y);
  return (y - B * coef).squaredNorm();
}

double golden_argmin(const std::function<double(double)> &f, double lo, double hi, int iterations) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc <= fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a), fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

} // namespace

PeriodEstimate estimate_period(std::span<const double> values, double p_min, double p_max) {
  const std::size_t n = values.size();
  if (!(p_min >= 2.0)) throw DataError("p_min must be at least 2 samples");
  if (!(p_max <= double(n) / 2.0)) throw DataError("p_max must not exceed half the series length");
  if (!(p_min <= p_max)) throw DataError("p_min must not exceed p_max");

  double mean = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("non-finite value in period estimation");
    mean += v;
  }
  mean /= double(n);
  std::vector<double> x(n);
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = values[i] - mean;
    spread = std::max(spread, std::abs(x[i]));
  }
  // Rounding residue of a constant signal is not a spectrum.
  const bool flat = spread <= 1e-12 * (1.0 + std::abs(mean));

  const auto k_lo = std::size_t(std::max(1.0, std::ceil(double(n) / p_max)));
  const auto k_hi = std::max(k_lo, std::size_t(std::floor(double(n) / p_min)));
  std::vector<double> bins(k_hi - k_lo + 1);
  for (std::size_t k = k_lo; k <= k_hi; ++k) bins[k - k_lo] = power_at(x, double(k) / double(n));
  double total = 0.0;
  for (double b : bins) total += b;
  const auto peak = std::size_t(std::max_element(bins.begin(), bins.end()) - bins.begin());

  PeriodEstimate est;
  const std::size_t k_star = k_lo + peak;
  if (flat || !(total > 0.0)) {
    est.period = est.spectral_period = std::clamp(double(n) / double(k_star), p_min, p_max);
    return est;
  }
  est.score = bins[peak] / total;

  const double f_lo = std::max(double(k_star - 1) / double(n), 1.0 / p_max);
  const double f_hi = std::min(double(k_star + 1) / double(n), 1.0 / p_min);
  const double f_star = grid_argmax([&](double f) { return power_at(x, f); }, f_lo, f_hi, 65);
  est.spectral_period = std::clamp(1.0 / f_star, p_min, p_max);

  // Bursty signals put more power in a harmonic than in the fundamental; the
  // autocorrelation at multiples of the spectral period tells them apart.
  double var = 0.0;
  for (double v : x) var += v * v;
  var /= double(n);
  std::vector<double> acf;
  for (int m = 1; double(m) * est.spectral_period <= p_max; ++m)
    acf.push_back(acf_peak_near(x, double(m) * est.spectral_period, var));
  if (!acf.empty()) {
    double best = *std::max_element(acf.begin(), acf.end());
    if (best > 0.0) {
      for (std::size_t m = 0; m < acf.size(); ++m)
        if (acf[m] >= 0.9 * best) {
          est.harmonic = int(m + 1);
          break;
        }
    }
  }

  const double coarse = est.harmonic * est.spectral_period;
  const int harmonics = std::clamp(int((coarse - 1.0) / 2.0), 1, 8);
  const double lo = std::max(p_min, 0.97 * coarse);
  const double hi = std::min(p_max, 1.03 * coarse);
  const double peak_period = grid_argmax([&](double p) { return harmonic_power(x, p, harmonics); }, lo, hi, 241);

  // Final polish: the period whose Fourier fit leaves the least residual. Spectral
  // leakage between harmonics biases the power peak slightly on short records.
  const double step = (hi - lo) / 240.0;
  const int fit_harmonics = std::clamp(int((peak_period - 1.0) / 2.0), 1, 10);
  const double polished = golden_argmin([&](double p) { return fourier_rss(x, p, fit_harmonics); },
                                        std::max(p_min, peak_period - 2 * step), std::min(p_max, peak_period + 2 * step), 40);
  est.period = std::clamp(polished, p_min, p_max);
  return est;
}

} // namespace cycleauth::forecast
