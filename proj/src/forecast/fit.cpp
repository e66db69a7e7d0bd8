#include "cycleauth/forecast/model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cycleauth::forecast {

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::VectorXd>;

// Fit works on tau = (t - t0) / span and y / y_scale; results are mapped back.
struct Scaling {
  double t0 = 0.0;
  double span = 1.0;
  double y_scale = 1.0;
};

// Columns entering linearly with a ridge penalty: seasonal terms, then event indicators.
struct RidgeBlock {
  Eigen::MatrixXd W;
  Eigen::VectorXd penalty;
};

RidgeBlock ridge_block(const TimeSeries &ts, const FitConfig &cfg, const EventTerm &events) {
  Eigen::Index cols = 0;
  for (const auto &s : cfg.seasonalities) cols += 2 * s.order;
  cols += Eigen::Index(events.windows.size());

  RidgeBlock b{Eigen::MatrixXd::Zero(ts.t.size(), cols), Eigen::VectorXd(cols)};
  Eigen::Index c = 0;
  for (const auto &s : cfg.seasonalities) {
    for (Eigen::Index i = 0; i < ts.t.size(); ++i)
      fourier_features(s.period, s.order, ts.t[i], b.W.row(i).segment(c, 2 * s.order));
    b.penalty.segment(c, 2 * s.order).setConstant(1.0 / (s.prior_scale * s.prior_scale));
    c += 2 * s.order;
  }
  for (const auto &w : events.windows) {
    for (Eigen::Index i = 0; i < ts.t.size(); ++i) b.W(i, c) = w.contains(ts.t[i]) ? 1.0 : 0.0;
    b.penalty[c] = 1.0 / (cfg.event_prior_scale * cfg.event_prior_scale);
    ++c;
  }
  return b;
}

double soft_threshold(double x, double lambda) {
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

// Minimizes d'Gd - 2c'd + lambda |d|_1 by cyclic coordinate descent.
Eigen::VectorXd lasso_quadratic(const Eigen::MatrixXd &G, const Eigen::VectorXd &c, double lambda, double tol) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(c.size());
  for (int sweep = 0; sweep < 10000; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < d.size(); ++j) {
      if (G(j, j) <= 1e-14) {
        d[j] = 0.0;
        continue;
      }
      double partial = c[j] - G.row(j).dot(d) + G(j, j) * d[j];
      double next = soft_threshold(partial, 0.5 * lambda) / G(j, j);
      max_change = std::max(max_change, std::abs(next - d[j]));
      d[j] = next;
    }
    if (max_change <= tol * (1.0 + d.cwiseAbs().maxCoeff())) break;
  }
  return d;
}

struct ScaledFit {
  double rate = 0.0;
  double offset = 0.0;
  Eigen::VectorXd delta;
  Eigen::VectorXd beta;
};

ScaledFit fit_linear(const Eigen::VectorXd &tau, const Eigen::VectorXd &ys, const Eigen::VectorXd &cps,
                     const RidgeBlock &rb, double lambda, double tol) {
  const Eigen::Index n = tau.size();
  const Eigen::Index p = rb.W.cols();
  const Eigen::Index S = cps.size();

  Eigen::MatrixXd B(n, 2 + p);
  B.col(0) = tau;
  B.col(1).setOnes();
  B.rightCols(p) = rb.W;
  Eigen::VectorXd pen(2 + p);
  pen << 1e-12, 1e-12, rb.penalty;

  Eigen::MatrixXd A(n, S);
  for (Eigen::Index j = 0; j < S; ++j) A.col(j) = (tau.array() - cps[j]).max(0.0).matrix();

  Eigen::MatrixXd K = B.transpose() * B;
  K.diagonal() += pen;
  Eigen::LDLT<Eigen::MatrixXd> solver(K);

  Eigen::VectorXd By = B.transpose() * ys;
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(S);
  if (S > 0) {
    Eigen::MatrixXd BA = B.transpose() * A;
    Eigen::MatrixXd KBA = solver.solve(BA);
    Eigen::MatrixXd G = A.transpose() * A - BA.transpose() * KBA;
    Eigen::VectorXd c = A.transpose() * ys - KBA.transpose() * By;
    delta = lasso_quadratic(G, c, lambda, tol);
    By -= BA * delta;
  }
  Eigen::VectorXd theta = solver.solve(By);

  ScaledFit out;
  out.rate = theta[0];
  out.offset = theta[1];
  out.delta = delta;
  out.beta = theta.tail(p);
  return out;
}

// Reduced least squares r' M r with M projecting out the ridge block.
struct RidgeProjector {
  const RidgeBlock *rb;
  Eigen::LDLT<Eigen::MatrixXd> solver;

  explicit RidgeProjector(const RidgeBlock &block) : rb(&block) {
    Eigen::MatrixXd K = block.W.transpose() * block.W;
    K.diagonal() += block.penalty;
    solver.compute(K);
  }

  bool empty() const { return rb->W.cols() == 0; }

  double objective(const Eigen::VectorXd &r) const {
    if (empty()) return r.squaredNorm();
    Eigen::VectorXd Wr = rb->W.transpose() * r;
    return r.squaredNorm() - Wr.dot(solver.solve(Wr));
  }

  Eigen::VectorXd coefficients(const Eigen::VectorXd &r) const {
    if (empty()) return {};
    return solver.solve(rb->W.transpose() * r);
  }
};

Eigen::VectorXd logistic_values(const TrendParamsd &p, const Eigen::VectorXd &tau) {
  Eigen::VectorXd g(tau.size());
  for (Eigen::Index i = 0; i < tau.size(); ++i) g[i] = eval_trend(p, tau[i]);
  return g;
}

TrendParamsd scaled_logistic(double cap, const Eigen::VectorXd &theta, const Eigen::VectorXd &cps) {
  return make_trend<double>(TrendKind::logistic, cap, theta[0], theta[1], cps, theta.tail(cps.size()));
}

ScaledFit fit_logistic(const Eigen::VectorXd &tau, const Eigen::VectorXd &ys, const Eigen::VectorXd &cps,
                       double cap, const RidgeBlock &rb, double lambda, const FitConfig &cfg) {
  const Eigen::Index n = tau.size();
  const Eigen::Index S = cps.size();
  const Eigen::Index dim = S + 2;
  RidgeProjector proj(rb);

  // Start from a line through logit(y / C).
  Eigen::VectorXd logit(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double q = std::clamp(ys[i] / cap, 1e-3, 1.0 - 1e-3);
    logit[i] = std::log(q / (1.0 - q));
  }
  Eigen::MatrixXd X(n, 2);
  X.col(0) = tau;
  X.col(1).setOnes();
  Eigen::Vector2d ab = (X.transpose() * X).ldlt().solve(X.transpose() * logit);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  theta[0] = std::abs(ab[0]) > 1e-6 ? ab[0] : 1e-3;
  theta[1] = std::clamp(-ab[1] / theta[0], -1.0, 2.0);

  auto penalized = [&](const Eigen::VectorXd &th) {
    Eigen::VectorXd r = ys - logistic_values(scaled_logistic(cap, th, cps), tau);
    return proj.objective(r) + lambda * th.tail(S).lpNorm<1>();
  };

  double phi = penalized(theta);
  double mu = 1e-3;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    // Jacobian of the trend with respect to (k, m, delta).
    TrendParams<AD> ad;
    ad.kind = TrendKind::logistic;
    ad.capacity = cap;
    ad.changepoints = cps;
    ad.rate = AD(theta[0], dim, 0);
    ad.offset = AD(theta[1], dim, 1);
    ad.delta.resize(S);
    for (Eigen::Index j = 0; j < S; ++j) ad.delta[j] = AD(theta[2 + j], dim, 2 + j);
    ad.gamma = continuity_gammas<AD>(TrendKind::logistic, ad.rate, ad.offset, cps, ad.delta);

    Eigen::MatrixXd J(n, dim);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      AD g = eval_trend(ad, tau[i]);
      r[i] = ys[i] - g.value();
      if (g.derivatives().size() == dim)
        J.row(i) = g.derivatives().transpose();
      else
        J.row(i).setZero();
    }

    Eigen::MatrixXd H = J.transpose() * J;
    Eigen::VectorXd grad = J.transpose() * r;
    if (!proj.empty()) {
      Eigen::MatrixXd WJ = rb.W.transpose() * J;
      Eigen::VectorXd Wr = rb.W.transpose() * r;
      Eigen::MatrixXd KWJ = proj.solver.solve(WJ);
      H -= WJ.transpose() * KWJ;
      grad -= KWJ.transpose() * Wr;
    }

    bool accepted = false;
    while (mu < 1e12) {
      Eigen::MatrixXd Hd = H;
      Hd.diagonal() += mu * H.diagonal().cwiseMax(1e-12);
      // Coordinate descent on z = theta + u with soft-thresholding on delta.
      Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
      for (int sweep = 0; sweep < 500; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
          double b = grad[i] - Hd.row(i).dot(u) + Hd(i, i) * u[i];
          double next = i < 2 ? b / Hd(i, i)
                              : soft_threshold(theta[i] + b / Hd(i, i), 0.5 * lambda / Hd(i, i)) - theta[i];
          max_change = std::max(max_change, std::abs(next - u[i]));
          u[i] = next;
        }
        if (max_change <= 1e-12 * (1.0 + u.cwiseAbs().maxCoeff())) break;
      }
      Eigen::VectorXd candidate = theta + u;
      candidate[1] = std::clamp(candidate[1], -1.0, 2.0);
      candidate[0] = std::clamp(candidate[0], -1e3, 1e3);

      double phi_new;
      try {
        phi_new = penalized(candidate);
      } catch (const DegenerateRate &) {
        phi_new = std::numeric_limits<double>::infinity();
      }
      if (std::isfinite(phi_new) && phi_new <= phi) {
        double gain = phi - phi_new;
        theta = candidate;
        phi = phi_new;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = gain > cfg.tolerance * (1.0 + phi);
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) break;
  }

  ScaledFit out;
  out.rate = theta[0];
  out.offset = theta[1];
  out.delta = theta.tail(S);
  out.beta = proj.coefficients(ys - logistic_values(scaled_logistic(cap, theta, cps), tau));
  return out;
}

double median_step(const Eigen::VectorXd &t) {
  std::vector<double> d(t.size() - 1);
  for (Eigen::Index i = 1; i < t.size(); ++i) d[i - 1] = t[i] - t[i - 1];
  auto mid = d.begin() + d.size() / 2;
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

ForecastModel fit_with_events(const TimeSeries &ts, const FitConfig &cfg, const Eigen::VectorXd &cps,
                              const EventTerm &events) {
  Scaling sc;
  sc.t0 = ts.t[0];
  sc.span = ts.t[ts.t.size() - 1] - ts.t[0];
  sc.y_scale = ts.y.cwiseAbs().maxCoeff();
  if (sc.y_scale == 0.0) sc.y_scale = 1.0;

  Eigen::VectorXd tau = (ts.t.array() - sc.t0) / sc.span;
  Eigen::VectorXd ys = ts.y / sc.y_scale;
  Eigen::VectorXd cps_scaled = (cps.array() - sc.t0) / sc.span;
  RidgeBlock rb = ridge_block(ts, cfg, events);
  const double lambda = 1.0 / cfg.changepoint_prior_scale;

  ForecastModel model;
  ScaledFit sf;
  if (cfg.trend == TrendKind::linear) {
    sf = fit_linear(tau, ys, cps_scaled, rb, lambda, cfg.tolerance);
    double k = sc.y_scale * sf.rate / sc.span;
    double m = sc.y_scale * (sf.offset - sf.rate * sc.t0 / sc.span);
    Eigen::VectorXd delta = sc.y_scale * sf.delta / sc.span;
    model.trend = make_trend<double>(TrendKind::linear, 1.0, k, m, cps, delta);
  } else {
    double capacity = cfg.capacity.value_or(1.1 * ts.y.cwiseAbs().maxCoeff());
    if (!(capacity > 0.0)) throw DataError("logistic trend requires a positive capacity");
    sf = fit_logistic(tau, ys, cps_scaled, capacity / sc.y_scale, rb, lambda, cfg);
    double k = sf.rate / sc.span;
    double m = sc.t0 + sc.span * sf.offset;
    Eigen::VectorXd delta = sf.delta / sc.span;
    model.trend = make_trend<double>(TrendKind::logistic, capacity, k, m, cps, delta);
  }

  Eigen::Index c = 0;
  for (const auto &s : cfg.seasonalities) {
    SeasonalityParams sp;
    sp.period = s.period;
    sp.order = s.order;
    sp.prior_scale = s.prior_scale;
    sp.coeffs = sc.y_scale * sf.beta.segment(c, 2 * s.order);
    c += 2 * s.order;
    model.seasonalities.push_back(std::move(sp));
  }
  model.events = events;
  for (auto &w : model.events.windows) w.effect = sc.y_scale * sf.beta[c++];

  model.t_min = ts.t[0];
  model.t_max = ts.t[ts.t.size() - 1];
  model.sample_step = median_step(ts.t);
  model.noise_sigma = residual_sigma(model, ts);
  model.delta_scale = model.trend.delta.size() ? model.trend.delta.cwiseAbs().mean() : 0.0;
  return model;
}

// Runs of samples whose residual exceeds threshold * sigma, skipping samples already
// covered by configured events.
EventTerm singular_windows(const ForecastModel &model, const TimeSeries &ts, double threshold,
                           const EventTerm &existing) {
  Eigen::VectorXd r(ts.t.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = ts.y[i] - eval_model(model, ts.t[i]);
  double mean = r.mean();
  double sigma = model.noise_sigma;

  EventTerm out;
  if (!(sigma > 0.0)) return out;
  bool open = false;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    bool covered = std::any_of(existing.windows.begin(), existing.windows.end(),
                               [&](const EventWindow &w) { return w.contains(ts.t[i]); });
    bool flagged = !covered && std::abs(r[i] - mean) > threshold * sigma;
    if (flagged && open) {
      out.windows.back().end = ts.t[i];
    } else if (flagged) {
      out.windows.push_back({ts.t[i], ts.t[i], 0.0});
    }
    open = flagged;
  }
  return out;
}

} // namespace

std::size_t min_fit_samples(const FitConfig &config, std::size_t n_changepoints) {
  std::size_t coeffs = 0;
  for (const auto &s : config.seasonalities) coeffs += 2 * std::size_t(std::max(s.order, 0));
  return 2 * (coeffs + n_changepoints + 2);
}

std::vector<double> place_changepoints(const TimeSeries &ts, const FitConfig &config) {
  const double t_min = ts.t[0];
  const double t_max = ts.t[ts.t.size() - 1];
  if (config.changepoints) {
    const auto &s = *config.changepoints;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!(s[j] >= t_min && s[j] <= t_max)) throw DataError("changepoint outside the training span");
      if (j > 0 && !(s[j] > s[j - 1])) throw DataError("changepoints must be strictly increasing");
    }
    return s;
  }
  std::vector<double> s;
  const int count = std::max(config.n_changepoints, 0);
  const double reach = std::clamp(config.changepoint_range, 0.0, 1.0) * (t_max - t_min);
  for (int j = 1; j <= count; ++j) {
    double v = t_min + reach * double(j) / double(count);
    if (v > t_min && (s.empty() || v > s.back())) s.push_back(v);
  }
  return s;
}

ForecastModel fit(const TimeSeries &ts, const FitConfig &config) {
  ts.validate();
  if (ts.size() < 2) throw UnderdeterminedFit("fit needs at least 2 samples");
  for (const auto &s : config.seasonalities) {
    if (!(s.period > 0.0) || s.order < 1 || !(s.prior_scale > 0.0))
      throw DataError("invalid seasonality specification");
  }
  if (!(config.changepoint_prior_scale > 0.0)) throw DataError("changepoint prior scale must be positive");
  if (!(config.event_prior_scale > 0.0)) throw DataError("event prior scale must be positive");
  config.events.validate();

  std::vector<double> cp = place_changepoints(ts, config);
  std::size_t needed = min_fit_samples(config, cp.size());
  if (ts.size() < needed)
    throw UnderdeterminedFit("fit needs at least " + std::to_string(needed) + " samples, got " +
                             std::to_string(ts.size()));
  Eigen::VectorXd cps = Eigen::Map<const Eigen::VectorXd>(cp.data(), Eigen::Index(cp.size()));

  ForecastModel model = fit_with_events(ts, config, cps, config.events);
  if (!config.detect_singularities) return model;

  EventTerm detected = singular_windows(model, ts, config.singularity_threshold, config.events);
  if (detected.empty()) return model;

  EventTerm merged = config.events;
  merged.windows.insert(merged.windows.end(), detected.windows.begin(), detected.windows.end());
  std::sort(merged.windows.begin(), merged.windows.end(),
            [](const EventWindow &a, const EventWindow &b) { return a.start < b.start; });
  return fit_with_events(ts, config, cps, merged);
}

double residual_sigma(const ForecastModel &model, const TimeSeries &ts) {
  const Eigen::Index n = ts.t.size();
  if (n == 0) return 0.0;
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) r[i] = ts.y[i] - eval_model(model, ts.t[i]);
  return std::sqrt((r.array() - r.mean()).square().mean());
}

double prediction_rmse(const ForecastModel &a, const ForecastModel &b, std::span<const double> times) {
  if (times.empty()) return 0.0;
  double sum = 0.0;
  for (double t : times) {
    double d = eval_model(a, t) - eval_model(b, t);
    sum += d * d;
  }
  return std::sqrt(sum / double(times.size()));
}

} // namespace cycleauth::forecast
