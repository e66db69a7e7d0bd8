#include "cycleauth/sim/scenario.hpp"

#include "cycleauth/errors.hpp"
#include "cycleauth/synth/generator.hpp"

#include <cmath>
#include <random>

namespace cycleauth::sim {

using nlohmann::json;

namespace {

std::optional<StepKind> parse_kind(const std::string &s) {
  for (auto k : {StepKind::owner, StepKind::impostor, StepKind::idle, StepKind::window})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

auth::ActivityWindow window_from_json(const json &j, Activity label, double t0) {
  auth::ActivityWindow w;
  w.label = label;
  const char *names[3] = {"x", "y", "z"};
  for (std::size_t a = 0; a < 3; ++a) {
    auto v = j.at(names[a]).get<std::vector<double>>();
    w.axes[a].y = Eigen::Map<Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
    w.axes[a].t = Eigen::VectorXd::LinSpaced(Eigen::Index(v.size()), t0, t0 + double(v.size()) - 1.0);
  }
  w.validate();
  return w;
}

std::uint64_t step_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t(out[0]) << 32) | out[1];
}

auth::ActivityWindow owner_window(const auth::ProfileEntry &e, Activity label, double noise, std::size_t n,
                                  std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> offset(0.0, 2.0 * e.period);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double start = e.axis_models[0].t_max + 1.0 + std::floor(offset(rng));
  auth::ActivityWindow w;
  w.label = label;
  for (std::size_t a = 0; a < 3; ++a) {
    const auto &m = e.axis_models[a];
    w.axes[a].t.resize(Eigen::Index(n));
    w.axes[a].y.resize(Eigen::Index(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double t = start + double(i);
      w.axes[a].t[Eigen::Index(i)] = t;
      w.axes[a].y[Eigen::Index(i)] = forecast::eval_model(m, t) + noise * m.noise_sigma * gauss(rng);
    }
  }
  return w;
}

} // namespace

std::string_view to_string(StepKind k) {
  switch (k) {
  case StepKind::owner: return "owner";
  case StepKind::impostor: return "impostor";
  case StepKind::idle: return "idle";
  case StepKind::window: return "window";
  }
  return "idle";
}

Scenario scenario_from_json(const json &doc) {
  try {
    Scenario s;
    if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
    if (doc.contains("activity")) {
      auto a = parse_activity(doc["activity"].get<std::string>());
      if (!a) throw ParseError("unknown activity '" + doc["activity"].get<std::string>() + "'");
      s.activity = *a;
    }
    s.seed = doc.value("seed", s.seed);
    s.window_length = doc.value("window_length", s.window_length);
    for (const auto &j : doc.at("steps")) {
      ScenarioStep st;
      st.t = j.at("t").get<double>();
      const auto kind = j.at("kind").get<std::string>();
      auto k = parse_kind(kind);
      if (!k) throw ParseError("unknown step kind '" + kind + "'");
      st.kind = *k;
      st.noise = j.value("noise", st.noise);
      st.amplitude = j.value("amplitude", st.amplitude);
      if (st.kind == StepKind::window) st.window = window_from_json(j.at("samples"), s.activity, st.t);
      s.steps.push_back(std::move(st));
    }
    return s;
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    throw ParseError(std::string("invalid scenario: ") + e.what());
  }
}

json scenario_to_json(const Scenario &s) {
  json steps = json::array();
  for (const auto &st : s.steps) {
    json j = {{"t", st.t}, {"kind", to_string(st.kind)}};
    if (st.kind == StepKind::owner) j["noise"] = st.noise;
    if (st.kind == StepKind::impostor) j["amplitude"] = st.amplitude;
    if (st.window) {
      const char *names[3] = {"x", "y", "z"};
      json samples;
      for (std::size_t a = 0; a < 3; ++a) {
        const auto &y = st.window->axes[a].y;
        samples[names[a]] = std::vector<double>(y.data(), y.data() + y.size());
      }
      j["samples"] = samples;
    }
    steps.push_back(j);
  }
  return {{"activity", to_string(s.activity)}, {"seed", s.seed}, {"window_length", s.window_length}, {"steps", steps}};
}

SimResult simulate(const auth::ActivityProfile &profile, const Scenario &scenario,
                   const energy::SensorPowerProfile &sensor, const SimConfig &config) {
  SimResult r;
  r.final_profile = profile;
  energy::RiskLevel risk = config.initial_risk;
  for (std::size_t i = 0; i < scenario.steps.size(); ++i) {
    const auto &st = scenario.steps[i];
    std::mt19937_64 rng(step_seed(scenario.seed, i));
    StepLog log;
    log.t = st.t;
    log.kind = st.kind;
    log.risk_before = risk;

    std::optional<auth::ActivityWindow> w;
    switch (st.kind) {
    case StepKind::owner: {
      auto it = r.final_profile.entries.find(scenario.activity);
      if (it == r.final_profile.entries.end())
        throw ColdStart("profile has no entry for '" + std::string(to_string(scenario.activity)) + "'");
      w = owner_window(it->second, scenario.activity, st.noise, scenario.window_length, rng);
      break;
    }
    case StepKind::impostor: {
      synth::ActivitySynth g;
      g.activity = scenario.activity;
      g.seed = rng();
      g.amplitude_scale = st.amplitude;
      const std::size_t begin = std::size_t(rng() % 200);
      auto rec = g.samples(begin + scenario.window_length);
      w = auth::ActivityWindow::from_recording(rec, begin, begin + scenario.window_length);
      break;
    }
    case StepKind::window: w = st.window; break;
    case StepKind::idle: break;
    }

    std::optional<auth::Verdict> verdict;
    if (w) {
      log.decision = auth::authenticate(*w, r.final_profile, config.auth);
      verdict = log.decision->verdict;
      if (config.retrain && *verdict == auth::Verdict::accept)
        r.final_profile = auth::accept_and_update(*w, *log.decision, r.final_profile, config.auth);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    log.spot_check = config.policy.spot_check_probability > 0.0 && unit(rng) < config.policy.spot_check_probability;
    const auto outcome = energy::policy_step(risk, verdict, st.kind == StepKind::idle, config.policy, log.spot_check);
    risk = outcome.risk;
    log.risk_after = risk;
    log.duty = outcome.schedule.fraction(config.policy.active_mode);
    log.energy = energy::estimate_energy(outcome.schedule, sensor);

    auto &t = r.totals;
    ++t.steps;
    if (verdict) {
      ++t.decisions;
      t.accepts += *verdict == auth::Verdict::accept;
      t.escalations += *verdict == auth::Verdict::escalate;
      t.rejects += *verdict == auth::Verdict::reject;
    }
    t.duration_s += outcome.schedule.frame_length;
    t.charge_uas += log.energy.charge_uas;
    if (risk == energy::RiskLevel::lockdown && !t.first_lockdown) t.first_lockdown = i + 1;
    r.log.push_back(std::move(log));
  }
  auto &t = r.totals;
  if (t.decisions) t.accept_rate = double(t.accepts) / double(t.decisions);
  if (t.duration_s > 0.0) t.average_ua = t.charge_uas / t.duration_s;
  return r;
}

json sim_log_json(const SimResult &r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    const auto &l = r.log[i];
    json row = {{"step", i + 1},
                {"t", l.t},
                {"kind", to_string(l.kind)},
                {"risk_before", energy::to_string(l.risk_before)},
                {"risk_after", energy::to_string(l.risk_after)},
                {"spot_check", l.spot_check},
                {"duty", l.duty},
                {"average_ua", l.energy.average_ua},
                {"charge_uas", l.energy.charge_uas}};
    row["decision"] = l.decision ? auth::decision_to_json(*l.decision) : json();
    rows.push_back(row);
  }
  return rows;
}

json sim_totals_json(const SimTotals &t) {
  return {{"steps", t.steps},
          {"decisions", t.decisions},
          {"accepts", t.accepts},
          {"escalations", t.escalations},
          {"rejects", t.rejects},
          {"accept_rate", t.accept_rate},
          {"duration_s", t.duration_s},
          {"charge_uas", t.charge_uas},
          {"average_ua", t.average_ua},
          {"first_lockdown", t.first_lockdown ? json(*t.first_lockdown) : json()}};
}

} // namespace cycleauth::sim
