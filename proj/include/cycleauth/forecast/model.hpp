#pragma once

#include "cycleauth/forecast/events.hpp"
#include "cycleauth/forecast/seasonality.hpp"
#include "cycleauth/forecast/timeseries.hpp"
#include "cycleauth/forecast/trend.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cycleauth::forecast {

/// Fitted additive model y(t) = trend(t) + sum seasonality(t) + events(t) + noise.
/// Immutable once returned by fit(); safe to share between threads.
struct ForecastModel {
  TrendParamsd trend;
  std::vector<SeasonalityParams> seasonalities;
  EventTerm events;
  double noise_sigma = 0.0;
  double delta_scale = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  /// Median training cadence; future horizons step by this.
  double sample_step = 1.0;
};

/// Evaluates trend, then each seasonality in order, then events, summed left to right.
inline double eval_model(const ForecastModel &m, double t) {
  double y = eval_trend(m.trend, t);
  for (const auto &s : m.seasonalities) y += eval_seasonality(s, t);
  y += eval_events(m.events, t);
  return y;
}

struct SeasonalitySpec {
  double period = 1.0;
  int order = 1;
  double prior_scale = 10.0;
};

struct FitConfig {
  TrendKind trend = TrendKind::linear;
  /// Logistic capacity; defaults to 1.1 * max|y| of the training data.
  std::optional<double> capacity;
  int n_changepoints = 10;
  double changepoint_range = 0.8;
  /// Explicit changepoints (original time units) override the automatic grid.
  std::optional<std::vector<double>> changepoints;
  double changepoint_prior_scale = 0.05;
  std::vector<SeasonalitySpec> seasonalities;
  EventTerm events;
  double event_prior_scale = 10.0;
  bool detect_singularities = true;
  double singularity_threshold = 3.0;
  int max_iterations = 200;
  double tolerance = 1e-10;
};

/// Penalized least-squares fit (ridge on seasonal/event coefficients, L1 on
/// changepoint rate adjustments). Deterministic.
ForecastModel fit(const TimeSeries &ts, const FitConfig &config);

/// Changepoint times the fit would place for this series.
std::vector<double> place_changepoints(const TimeSeries &ts, const FitConfig &config);

/// Minimum series length accepted by fit() for this configuration.
std::size_t min_fit_samples(const FitConfig &config, std::size_t n_changepoints);

struct PredictionBand {
  std::vector<double> t;
  std::vector<double> yhat;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.8;

  std::size_t size() const { return t.size(); }
};

struct PredictConfig {
  double level = 0.8;
  int n_sims = 1000;
  std::uint64_t seed = 42;
};

/// Band at t_max + step, ..., t_max + horizon * step.
PredictionBand predict(const ForecastModel &model, std::size_t horizon, const PredictConfig &config = {});

/// Band at arbitrary increasing times. Future changepoints are simulated only past t_max.
PredictionBand predict_at(const ForecastModel &model, std::span<const double> times, const PredictConfig &config = {});

/// Population standard deviation of in-sample residuals.
double residual_sigma(const ForecastModel &model, const TimeSeries &ts);

/// Root mean squared difference of model predictions over the given times.
double prediction_rmse(const ForecastModel &a, const ForecastModel &b, std::span<const double> times);

} // namespace cycleauth::forecast
