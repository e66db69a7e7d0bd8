#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace cycleauth::forecast {

/// Fourier seasonality with `order` harmonics of base `period`.
/// coeffs holds (a_1, b_1, a_2, b_2, ...) for a_n cos(2 pi n t / P) + b_n sin(2 pi n t / P).
struct SeasonalityParams {
  double period = 1.0;
  int order = 1;
  Eigen::VectorXd coeffs;
  double prior_scale = 10.0;

  void validate() const;
};

template <typename Scalar> Scalar eval_seasonality(const SeasonalityParams &sp, Scalar t) {
  using std::cos;
  using std::sin;
  Scalar sum(0);
  for (int n = 1; n <= sp.order; ++n) {
    Scalar phase = Scalar(2 * std::numbers::pi * n) * t / Scalar(sp.period);
    sum += Scalar(sp.coeffs[2 * (n - 1)]) * cos(phase) + Scalar(sp.coeffs[2 * (n - 1) + 1]) * sin(phase);
  }
  return sum;
}

/// Row of the seasonal design matrix at t, ordered like `coeffs`.
inline void fourier_features(double period, int order, double t, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> out) {
  for (int n = 1; n <= order; ++n) {
    double phase = 2 * std::numbers::pi * n * t / period;
    out[2 * (n - 1)] = std::cos(phase);
    out[2 * (n - 1) + 1] = std::sin(phase);
  }
}

/// Complex coefficients c_n = (a_n - i b_n) / 2 for n = 1..N.
inline std::vector<std::complex<double>> complex_coefficients(const SeasonalityParams &sp) {
  std::vector<std::complex<double>> c(sp.order);
  for (int n = 0; n < sp.order; ++n) c[n] = {0.5 * sp.coeffs[2 * n], -0.5 * sp.coeffs[2 * n + 1]};
  return c;
}

/// Two-sided complex Fourier sum over n = -N..N (n != 0) with c_{-n} = conj(c_n).
/// Its real part equals eval_seasonality; the imaginary part vanishes.
inline std::complex<double> eval_seasonality_complex(double period, const std::vector<std::complex<double>> &c,
                                                     double t) {
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t k = 0; k < c.size(); ++k) {
    double n = double(k + 1);
    std::complex<double> e = std::polar(1.0, 2 * std::numbers::pi * n * t / period);
    sum += c[k] * e + std::conj(c[k]) * std::conj(e);
  }
  return sum;
}

} // namespace cycleauth::forecast
