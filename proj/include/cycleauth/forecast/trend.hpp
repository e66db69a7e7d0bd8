#pragma once

#include "cycleauth/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>

namespace cycleauth::forecast {

template <typename Scalar> using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class TrendKind { linear, logistic };

/// Plain double value of a scalar; overloaded for AutoDiff scalars below.
inline double scalar_value(double x) { return x; }
inline double scalar_value(long double x) { return static_cast<double>(x); }
inline double scalar_value(float x) { return x; }
template <typename Derived> double scalar_value(const Derived &x) { return static_cast<double>(x.value()); }

/// Piecewise trend. Changepoints and capacity are fixed data; rate, offset and the
/// adjustment vectors carry the scalar type so the trend can be differentiated.
///
/// `offset` is the intercept for the linear kind and the logistic midpoint for the
/// logistic kind. `gamma` is always the continuity correction of the rest.
template <typename Scalar> struct TrendParams {
  TrendKind kind = TrendKind::linear;
  double capacity = 1.0;
  Scalar rate{0};
  Scalar offset{0};
  Eigen::VectorXd changepoints;
  VectorX<Scalar> delta;
  VectorX<Scalar> gamma;

  Eigen::Index size() const { return changepoints.size(); }
};

using TrendParamsd = TrendParams<double>;

/// Offset adjustments that make the trend continuous at every changepoint.
///
/// linear:   gamma_j = -s_j * delta_j
/// logistic: gamma_j = (s_j - m - sum_{l<j} gamma_l) * (1 - r_{j-1} / r_j),
///           r_j = k + sum_{l<=j} delta_l
template <typename Scalar>
VectorX<Scalar> continuity_gammas(TrendKind kind, const Scalar &rate, const Scalar &offset,
                                  const Eigen::VectorXd &changepoints, const VectorX<Scalar> &delta) {
  if (changepoints.size() != delta.size())
    throw DataError("changepoint and delta counts differ");
  VectorX<Scalar> gamma(delta.size());
  if (kind == TrendKind::linear) {
    for (Eigen::Index j = 0; j < delta.size(); ++j) gamma[j] = -changepoints[j] * delta[j];
    return gamma;
  }
  Scalar cum_rate = rate;
  Scalar cum_offset = offset;
  for (Eigen::Index j = 0; j < delta.size(); ++j) {
    Scalar next_rate = cum_rate + delta[j];
    if (scalar_value(next_rate) == 0.0)
      throw DegenerateRate("logistic rate is zero after changepoint " + std::to_string(j));
    gamma[j] = (changepoints[j] - cum_offset) * (Scalar(1) - cum_rate / next_rate);
    cum_offset += gamma[j];
    cum_rate = next_rate;
  }
  return gamma;
}

template <typename Scalar>
TrendParams<Scalar> make_trend(TrendKind kind, double capacity, const Scalar &rate, const Scalar &offset,
                               Eigen::VectorXd changepoints, VectorX<Scalar> delta) {
  if (kind == TrendKind::logistic && !(capacity > 0.0)) throw DataError("logistic trend requires capacity > 0");
  for (Eigen::Index j = 1; j < changepoints.size(); ++j)
    if (!(changepoints[j] > changepoints[j - 1])) throw DataError("changepoints must be strictly increasing");
  TrendParams<Scalar> p;
  p.kind = kind;
  p.capacity = capacity;
  p.rate = rate;
  p.offset = offset;
  p.gamma = continuity_gammas<Scalar>(kind, rate, offset, changepoints, delta);
  p.changepoints = std::move(changepoints);
  p.delta = std::move(delta);
  return p;
}

/// Number of changepoints s_j with t >= s_j (the step indicator a(t)).
inline Eigen::Index active_changepoints(const Eigen::VectorXd &changepoints, double t) {
  Eigen::Index n = 0;
  while (n < changepoints.size() && t >= changepoints[n]) ++n;
  return n;
}

inline constexpr double kExpSaturation = 700.0;

/// Trend with the first `n_active` adjustments switched on, regardless of t.
/// Evaluating at s_j with n_active = j and j + 1 gives the two one-sided limits.
template <typename Scalar> Scalar eval_trend_active(const TrendParams<Scalar> &p, double t, Eigen::Index n_active) {
  using std::exp;
  Scalar rate = p.rate;
  Scalar offset = p.offset;
  for (Eigen::Index j = 0; j < n_active; ++j) {
    rate += p.delta[j];
    offset += p.gamma[j];
  }
  if (p.kind == TrendKind::linear) return rate * t + offset;

  Scalar arg = -rate * (t - offset);
  double v = scalar_value(arg);
  if (v > kExpSaturation) return Scalar(0);
  if (v < -kExpSaturation) return Scalar(p.capacity);
  return Scalar(p.capacity) / (Scalar(1) + exp(arg));
}

template <typename Scalar> Scalar eval_trend(const TrendParams<Scalar> &p, double t) {
  return eval_trend_active(p, t, active_changepoints(p.changepoints, t));
}

template <typename Scalar> Scalar eval_logistic_trend(const TrendParams<Scalar> &p, double t) {
  if (p.kind != TrendKind::logistic) throw DataError("eval_logistic_trend called on a linear trend");
  return eval_trend(p, t);
}

template <typename Scalar> Scalar eval_linear_trend(const TrendParams<Scalar> &p, double t) {
  if (p.kind != TrendKind::linear) throw DataError("eval_linear_trend called on a logistic trend");
  return eval_trend(p, t);
}

/// Saturating growth without changepoints: C / (1 + exp(-k (t - m))).
inline double plain_logistic(double capacity, double rate, double offset, double t) {
  double arg = -rate * (t - offset);
  if (arg > kExpSaturation) return 0.0;
  if (arg < -kExpSaturation) return capacity;
  return capacity / (1.0 + std::exp(arg));
}

/// |right limit - left limit| at every changepoint.
template <typename Scalar> VectorX<double> changepoint_jumps(const TrendParams<Scalar> &p) {
  VectorX<double> jumps(p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    double s = p.changepoints[j];
    jumps[j] = std::abs(scalar_value(eval_trend_active(p, s, j + 1)) - scalar_value(eval_trend_active(p, s, j)));
  }
  return jumps;
}

} // namespace cycleauth::forecast
