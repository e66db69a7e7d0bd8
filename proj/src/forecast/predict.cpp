#include "cycleauth/forecast/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cycleauth::forecast {

namespace {

double laplace(std::mt19937_64 &rng, double scale) {
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  double u = unif(rng);
  double sign = u < 0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(u));
}

// Type-7 (linear interpolation) empirical quantile of sorted data.
double quantile_sorted(const std::vector<double> &sorted, double q) {
  double pos = q * double(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - double(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// Trend with extra future changepoints appended, continuity restored.
TrendParamsd extend_trend(const TrendParamsd &base, const std::vector<double> &s, const std::vector<double> &d) {
  Eigen::Index n = base.size();
  Eigen::Index extra = Eigen::Index(s.size());
  Eigen::VectorXd cps(n + extra), delta(n + extra);
  cps.head(n) = base.changepoints;
  delta.head(n) = base.delta;
  for (Eigen::Index j = 0; j < extra; ++j) {
    cps[n + j] = s[j];
    delta[n + j] = d[j];
  }
  return make_trend<double>(base.kind, base.capacity, base.rate, base.offset, std::move(cps), std::move(delta));
}

} // namespace

PredictionBand predict_at(const ForecastModel &model, std::span<const double> times, const PredictConfig &config) {
  if (config.n_sims < 20) throw InsufficientSimulations("n_sims must be at least 20");
  if (!(config.level > 0.0 && config.level < 1.0)) throw DataError("interval level must be in (0, 1)");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw DataError("non-finite prediction time");
    if (i > 0 && !(times[i] > times[i - 1])) throw DataError("prediction times must be strictly increasing");
  }

  const std::size_t n = times.size();
  PredictionBand band;
  band.level = config.level;
  band.t.assign(times.begin(), times.end());
  band.yhat.resize(n);
  std::vector<double> base_trend(n);
  for (std::size_t i = 0; i < n; ++i) {
    band.yhat[i] = eval_model(model, times[i]);
    base_trend[i] = eval_trend(model.trend, times[i]);
  }
  band.lower = band.yhat;
  band.upper = band.yhat;
  if (n == 0 || (model.noise_sigma == 0.0 && model.delta_scale == 0.0)) return band;

  const double t_last = times[n - 1];
  const double span = model.t_max - model.t_min;
  const double cp_rate = span > 0 ? double(model.trend.size()) / span : 0.0;
  const bool simulate_changes = model.delta_scale > 0.0 && cp_rate > 0.0 && t_last > model.t_max;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> paths(n, std::vector<double>(std::size_t(config.n_sims)));

  for (int sim = 0; sim < config.n_sims; ++sim) {
    std::vector<double> new_s, new_d;
    if (simulate_changes) {
      std::poisson_distribution<int> count(cp_rate * (t_last - model.t_max));
      std::uniform_real_distribution<double> where(model.t_max, t_last);
      int k = count(rng);
      new_s.resize(std::size_t(k));
      for (auto &s : new_s) s = where(rng);
      std::sort(new_s.begin(), new_s.end());
      new_s.erase(std::unique(new_s.begin(), new_s.end()), new_s.end());
      new_s.erase(std::remove_if(new_s.begin(), new_s.end(), [&](double s) { return !(s > model.t_max); }),
                  new_s.end());
      new_d.resize(new_s.size());
      for (auto &d : new_d) d = laplace(rng, model.delta_scale);
    }
    std::optional<TrendParamsd> sim_trend;
    if (!new_s.empty()) {
      try {
        sim_trend = extend_trend(model.trend, new_s, new_d);
      } catch (const DegenerateRate &) {
        sim_trend.reset();
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double v = band.yhat[i];
      if (sim_trend) v += eval_trend(*sim_trend, times[i]) - base_trend[i];
      if (model.noise_sigma > 0.0) v += model.noise_sigma * noise(rng);
      paths[i][std::size_t(sim)] = v;
    }
  }

  const double q_lo = 0.5 * (1.0 - config.level);
  const double q_hi = 0.5 * (1.0 + config.level);
  for (std::size_t i = 0; i < n; ++i) {
    auto &p = paths[i];
    std::sort(p.begin(), p.end());
    band.lower[i] = std::min(quantile_sorted(p, q_lo), band.yhat[i]);
    band.upper[i] = std::max(quantile_sorted(p, q_hi), band.yhat[i]);
  }
  return band;
}

PredictionBand predict(const ForecastModel &model, std::size_t horizon, const PredictConfig &config) {
  if (horizon < 1) throw DataError("horizon must be at least 1");
  std::vector<double> times(horizon);
  for (std::size_t h = 0; h < horizon; ++h) times[h] = model.t_max + model.sample_step * double(h + 1);
  return predict_at(model, times, config);
}

} // namespace cycleauth::forecast
