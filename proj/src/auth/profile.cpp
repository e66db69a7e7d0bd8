#include "cycleauth/auth/profile.hpp"

#include "cycleauth/errors.hpp"
#include "cycleauth/forecast/period.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace cycleauth::auth {

namespace {

int order_for(double period, int max_order) {
  return std::clamp(max_order, 1, std::max(1, int((period - 1.0) / 2.0)));
}

std::array<forecast::ForecastModel, 3> fit_axes(const std::vector<double> &t,
                                                const std::array<std::vector<double>, 3> &axes, double period,
                                                int order, const forecast::FitConfig &base) {
  forecast::FitConfig cfg = base;
  cfg.seasonalities = {{period, order}};
  auto fit_one = [&](std::size_t a) {
    forecast::TimeSeries ts;
    ts.t = Eigen::Map<const Eigen::VectorXd>(t.data(), Eigen::Index(t.size()));
    ts.y = Eigen::Map<const Eigen::VectorXd>(axes[a].data(), Eigen::Index(t.size()));
    return forecast::fit(ts, cfg);
  };
  auto fy = std::async(std::launch::async, fit_one, std::size_t(1));
  auto fz = std::async(std::launch::async, fit_one, std::size_t(2));
  auto mx = fit_one(0);
  return {std::move(mx), fy.get(), fz.get()};
}

NoveltyModel novelty_from_buffer(Activity label, const std::vector<double> &t,
                                 const std::array<std::vector<double>, 3> &axes, const AuthConfig &cfg) {
  const std::size_t n = t.size();
  const std::size_t len = std::min(cfg.window_length, n);
  std::size_t stride = std::max<std::size_t>(1, cfg.window_stride);
  if ((n - len) / stride + 1 < 5) stride = std::max<std::size_t>(1, (n - len) / 4);
  if ((n - len) / stride + 1 < 5) throw ColdStart("not enough samples for novelty training windows");

  std::vector<Eigen::VectorXd> features;
  for (std::size_t b = 0; b + len <= n; b += stride) {
    ActivityWindow w;
    w.label = label;
    for (std::size_t a = 0; a < 3; ++a) {
      w.axes[a].t = Eigen::Map<const Eigen::VectorXd>(t.data() + b, Eigen::Index(len));
      w.axes[a].y = Eigen::Map<const Eigen::VectorXd>(axes[a].data() + b, Eigen::Index(len));
    }
    features.push_back(extract_features(w));
  }
  return train_novelty(label, features, cfg.novelty);
}

void refit(ProfileEntry &e, Activity label, const AuthConfig &cfg) {
  e.axis_models = fit_axes(e.buffer_t, e.buffer, e.period, e.order, cfg.fit);
  for (std::size_t a = 0; a < 3; ++a) e.singularities[a] = e.axis_models[a].events;
  e.novelty = novelty_from_buffer(label, e.buffer_t, e.buffer, cfg);
}

const ProfileEntry &entry_for(const ProfileEntry *e, Activity label) {
  if (!e) throw ColdStart("no profile entry for '" + std::string(to_string(label)) + "'; collect more cycles");
  return *e;
}

} // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::accept: return "accept";
  case Verdict::escalate: return "escalate";
  case Verdict::reject: return "reject";
  }
  return "reject";
}

std::size_t count_cycles(std::size_t n, double period) {
  if (!(period > 0.0)) return 0;
  return std::size_t(std::floor(double(n) / period + 0.25));
}

ProfileEntry make_entry(Activity label, const std::vector<double> &t, const std::array<std::vector<double>, 3> &axes,
                        const AuthConfig &config) {
  if (label == Activity::unknown) throw TrainingContract("profile entries need a known activity label");
  const std::size_t n = t.size();
  for (const auto &a : axes)
    if (a.size() != n) throw DataError("axes and time stamps differ in length");
  if (double(n) / 2.0 < config.period_min)
    throw ColdStart("only " + std::to_string(n) + " samples; collect more cycles");

  forecast::PeriodEstimate best;
  for (const auto &a : axes) {
    auto est = forecast::estimate_period(a, config.period_min, double(n) / 2.0);
    if (est.score > best.score) best = est;
  }
  const std::size_t cycles = count_cycles(n, best.period);
  if (best.score <= 0.0 || cycles < std::size_t(config.min_cycles))
    throw ColdStart("found " + std::to_string(cycles) + " cycles, need " + std::to_string(config.min_cycles));

  ProfileEntry e;
  e.period = best.period;
  e.order = order_for(best.period, config.max_order);
  e.observation_count = cycles;
  e.buffer_t = t;
  e.buffer = axes;
  if (n > config.buffer_cap) {
    const auto drop = std::ptrdiff_t(n - config.buffer_cap);
    e.buffer_t.erase(e.buffer_t.begin(), e.buffer_t.begin() + drop);
    for (auto &a : e.buffer) a.erase(a.begin(), a.begin() + drop);
  }
  refit(e, label, config);
  return e;
}

ProfileEntry make_entry(const io::Recording &rec, const AuthConfig &config) {
  rec.validate();
  std::vector<double> t(rec.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = double(i);
  return make_entry(rec.label, t, rec.axes, config);
}

ActivityProfile with_recording(const ActivityProfile &profile, const io::Recording &rec, const AuthConfig &config) {
  ActivityProfile out = profile;
  out.entries.insert_or_assign(rec.label, make_entry(rec, config));
  return out;
}

AuthDecision authenticate(const ActivityWindow &w, const ActivityProfile &profile, const AuthConfig &config) {
  w.validate();
  AuthDecision d;
  d.te_threshold = config.te_threshold;
  d.escalation_floor = config.escalation_floor;

  const Eigen::VectorXd features = extract_features(w);
  const ProfileEntry *entry = nullptr;
  if (w.label == Activity::unknown) {
    double best = -1.0;
    for (const auto &[label, e] : profile.entries) {
      const double s = e.novelty.score(features);
      if (s > best) {
        best = s;
        entry = &e;
        d.matched = label;
      }
    }
  } else if (auto it = profile.entries.find(w.label); it != profile.entries.end()) {
    entry = &it->second;
    d.matched = w.label;
  }
  const ProfileEntry &e = entry_for(entry, w.label);

  const std::size_t n = w.size();
  if (double(n) < e.period) throw TooShort("window is shorter than one period");
  d.novelty_score = e.novelty.score(features);
  d.novelty_threshold = e.novelty.threshold;
  d.novelty_pass = e.novelty.passes(d.novelty_score);

  std::vector<double> times(w.axes[0].t.data(), w.axes[0].t.data() + n);
  if (config.alignment == Alignment::phase) {
    const auto &m0 = e.axis_models[0];
    auto sse_at = [&](double shift) {
      double sse = 0.0;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < n; ++i) {
          const double t = m0.t_max + m0.sample_step * (1.0 + shift + double(i));
          const double r = w.axes[a].y[Eigen::Index(i)] - forecast::eval_model(e.axis_models[a], t);
          sse += r * r;
        }
      return sse;
    };
    double shift = 0.0, best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < int(std::ceil(e.period)); ++s)
      if (double v = sse_at(s); v < best) best = v, shift = s;
    const double coarse = shift;
    for (int k = -10; k <= 10; ++k)
      if (double v = sse_at(coarse + 0.05 * k); v < best) best = v, shift = coarse + 0.05 * k;
    for (std::size_t i = 0; i < n; ++i) times[i] = m0.t_max + m0.sample_step * (1.0 + shift + double(i));
  }
  d.aligned_t = times;
  for (std::size_t a = 0; a < 3; ++a) {
    const auto band = forecast::predict_at(e.axis_models[a], times, config.predict);
    std::size_t inside = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = w.axes[a].y[Eigen::Index(i)];
      if (band.lower[i] <= y && y <= band.upper[i]) ++inside;
    }
    d.axis_coverage[a] = double(inside) / double(n);
  }
  d.coverage_ratio = *std::min_element(d.axis_coverage.begin(), d.axis_coverage.end());

  if (d.coverage_ratio < config.escalation_floor || !d.novelty_pass)
    d.verdict = Verdict::reject;
  else if (d.coverage_ratio >= config.te_threshold)
    d.verdict = Verdict::accept;
  else
    d.verdict = Verdict::escalate;
  return d;
}

ActivityProfile accept_and_update(const ActivityWindow &w, const AuthDecision &decision,
                                  const ActivityProfile &profile, const AuthConfig &config) {
  if (decision.verdict != Verdict::accept)
    throw ContractViolation("update requires an accept decision, got " + std::string(to_string(decision.verdict)));
  w.validate();
  if (decision.aligned_t.size() != w.size()) throw ContractViolation("decision does not belong to this window");
  auto it = profile.entries.find(decision.matched);
  if (it == profile.entries.end()) throw ContractViolation("decision refers to an activity missing from the profile");

  ActivityProfile out = profile;
  ProfileEntry &e = out.entries.at(decision.matched);
  if (!e.buffer_t.empty() && decision.aligned_t.front() <= e.buffer_t.back())
    throw DataError("window times must follow the training buffer");
  e.buffer_t.insert(e.buffer_t.end(), decision.aligned_t.begin(), decision.aligned_t.end());
  for (std::size_t a = 0; a < 3; ++a)
    e.buffer[a].insert(e.buffer[a].end(), w.axes[a].y.data(), w.axes[a].y.data() + w.size());
  if (e.buffer_t.size() > config.buffer_cap) {
    const auto drop = std::ptrdiff_t(e.buffer_t.size() - config.buffer_cap);
    e.buffer_t.erase(e.buffer_t.begin(), e.buffer_t.begin() + drop);
    for (auto &a : e.buffer) a.erase(a.begin(), a.begin() + drop);
  }
  e.observation_count += 1;
  refit(e, decision.matched, config);
  return out;
}

} // namespace cycleauth::auth
