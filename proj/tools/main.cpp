#include "run_config.hpp"

#include "cycleauth/errors.hpp"
#include "cycleauth/forecast/period.hpp"
#include "cycleauth/forecast/serialize.hpp"
#include "cycleauth/io/csv.hpp"
#include "cycleauth/sim/scenario.hpp"
#include "cycleauth/synth/generator.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cycleauth;

namespace {

struct Selection {
  std::string input;
  std::string activity;
  std::string subject;
};

Activity activity_arg(const std::string &s) {
  auto a = parse_activity(s);
  if (!a) throw ParseError("unknown activity '" + s + "'");
  return *a;
}

io::Recording select_recording(const Selection &sel) {
  const Activity label = activity_arg(sel.activity);
  for (auto &r : io::load_csv(fs::path(sel.input)))
    if (r.label == label && (sel.subject.empty() || r.subject_id == sel.subject)) return r;
  throw ParseError("no recording of '" + sel.activity + "'" + (sel.subject.empty() ? "" : " for subject " + sel.subject) +
                   " in " + sel.input);
}

void write_text(const fs::path &path, const std::string &text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << text;
}

json read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

json meta(const std::string &command, const cli::RunConfig &cfg, json inputs = json::object()) {
  return {{"command", command}, {"seed", cfg.seed}, {"config", cli::config_to_json(cfg)}, {"inputs", inputs}};
}

/// Seasonality for a recording when the config names none.
forecast::FitConfig with_auto_seasonality(const io::Recording &rec, const cli::RunConfig &cfg) {
  forecast::FitConfig fc = cfg.fit;
  const double p_max = double(rec.size()) / 2.0;
  if (!fc.seasonalities.empty() || p_max < cfg.cv.period_min) return fc;
  forecast::PeriodEstimate best;
  for (const auto &axis : rec.axes) {
    auto est = forecast::estimate_period(axis, cfg.cv.period_min, p_max);
    if (est.score > best.score) best = est;
  }
  if (best.score > 0.0)
    fc.seasonalities.push_back({best.period, std::clamp(cfg.cv.auto_order, 1, std::max(1, int((best.period - 1) / 2)))});
  return fc;
}

energy::SensorPowerProfile sensor_of(const cli::RunConfig &cfg) {
  const auto table = cfg.sensor_table.empty() ? energy::default_profiles() : energy::load_profiles(cfg.sensor_table);
  try {
    return energy::find_profile(table, cfg.sensor);
  } catch (const ProfileMismatch &e) {
    throw ParseError(e.what());
  }
}

auth::ActivityProfile read_profile(const std::string &path) { return auth::profile_from_json(read_json(path)); }

std::string dump(const json &j) { return j.dump(2) + "\n"; }

int cmd_fit(const Selection &sel, const std::string &out, const cli::RunConfig &cfg) {
  const auto rec = select_recording(sel);
  const auto fc = with_auto_seasonality(rec, cfg);
  std::ostringstream summary;
  summary << "fit " << to_string(rec.label) << " subject " << rec.subject_id << ": " << rec.size() << " samples";
  if (!fc.seasonalities.empty()) summary << ", period " << io::format_number(fc.seasonalities[0].period);
  for (int a = 0; a < 3; ++a) {
    const auto model = forecast::fit(rec.axis_series(a), fc);
    json m = meta("fit", cfg, {{"input", sel.input}, {"subject", rec.subject_id}, {"activity", to_string(rec.label)}});
    m["axis"] = io::kAxisNames[std::size_t(a)];
    write_text(fs::path(out) / ("model_" + std::string(io::kAxisNames[std::size_t(a)]) + ".json"),
               forecast::dump_model(model, m));
    summary << ", sigma_" << io::kAxisNames[std::size_t(a)] << " " << io::format_number(model.noise_sigma);
  }
  std::cout << summary.str() << "\n";
  return 0;
}

int cmd_predict(const std::string &model_path, const std::string &out, const cli::RunConfig &cfg) {
  std::ifstream in(model_path);
  if (!in) throw ParseError("cannot open '" + model_path + "'");
  std::stringstream text;
  text << in.rdbuf();
  const auto model = forecast::parse_model(text.str());
  const auto band = forecast::predict(model, cfg.horizon, cfg.predict);
  json doc = {{"meta", meta("predict", cfg, {{"model", model_path}})},
              {"level", band.level},
              {"t", band.t},
              {"yhat", band.yhat},
              {"lower", band.lower},
              {"upper", band.upper}};
  if (out.empty())
    std::cout << dump(doc);
  else
    write_text(out, dump(doc));
  std::cerr << "predicted " << band.size() << " steps at level " << io::format_number(band.level) << "\n";
  return 0;
}

int cmd_crossval(const Selection &sel, const std::string &out, const cli::RunConfig &cfg) {
  const auto rec = select_recording(sel);
  const auto split = io::make_cv_splits(rec, cfg.cv_train, cfg.cv_block, cfg.cv_blocks);
  const auto result = eval::run_cv(rec, split, cfg.fit, cfg.cv);
  std::ostringstream csv;
  eval::write_cv_csv(csv, result);
  json summary = eval::cv_summary(result);
  summary["meta"] =
      meta("crossval", cfg, {{"input", sel.input}, {"subject", rec.subject_id}, {"activity", to_string(rec.label)}});
  if (!out.empty()) {
    write_text(fs::path(out) / "crossval.csv", csv.str());
    write_text(fs::path(out) / "crossval_summary.json", dump(summary));
  }
  std::cout << csv.str();
  std::cout << "worst axis mse " << io::format_number(eval::worst_axis_mse(result)) << "\n";
  return 0;
}

auth::ActivityWindow window_of(const Selection &sel, std::size_t begin, std::size_t length) {
  const auto rec = select_recording(sel);
  if (begin + length > rec.size())
    throw ParseError("window [" + std::to_string(begin) + ", " + std::to_string(begin + length) + ") exceeds the " +
                     std::to_string(rec.size()) + "-sample recording");
  return auth::ActivityWindow::from_recording(rec, begin, begin + length);
}

int cmd_auth(const std::string &profile_path, const Selection &sel, std::size_t begin, std::size_t length,
             const std::string &out, const cli::RunConfig &cfg) {
  const auto profile = read_profile(profile_path);
  const auto w = window_of(sel, begin, length ? length : cfg.auth.window_length);
  const auto d = auth::authenticate(w, profile, cfg.auth);
  json doc = auth::decision_to_json(d);
  doc["meta"] = meta("auth", cfg, {{"profile", profile_path}, {"input", sel.input}, {"begin", begin}});
  if (!out.empty()) write_text(out, dump(doc));
  std::cout << to_string(d.verdict) << " coverage " << io::format_number(d.coverage_ratio) << " novelty "
            << io::format_number(d.novelty_score) << "\n";
  return 0;
}

int cmd_simulate(const std::string &profile_path, const std::string &scenario_path, const std::string &out,
                 const cli::RunConfig &cfg) {
  const auto profile = read_profile(profile_path);
  const auto scenario = sim::scenario_from_json(read_json(scenario_path));
  sim::SimConfig sc;
  sc.auth = cfg.auth;
  sc.policy = cfg.policy;
  sc.initial_risk = cfg.initial_risk;
  sc.retrain = cfg.retrain;
  const auto result = sim::simulate(profile, scenario, sensor_of(cfg), sc);
  json doc = {{"meta", meta("simulate", cfg, {{"profile", profile_path}, {"scenario", scenario_path}})},
              {"log", sim::sim_log_json(result)},
              {"totals", sim::sim_totals_json(result.totals)}};
  if (!out.empty()) write_text(fs::path(out) / "simulate.json", dump(doc));
  const auto &t = result.totals;
  std::cout << "steps " << t.steps << " decisions " << t.decisions << " accept_rate " << io::format_number(t.accept_rate)
            << " average_ua " << io::format_number(t.average_ua) << "\n";
  return 0;
}

int cmd_energy(const std::optional<double> &duty, const std::string &risk, const std::string &out,
               const cli::RunConfig &cfg) {
  const auto sensor = sensor_of(cfg);
  energy::DutyCycleSchedule schedule;
  if (duty) {
    schedule = energy::duty_schedule(cfg.policy.frame_length, *duty, cfg.policy.active_mode, cfg.policy.sleep_mode);
  } else {
    auto r = energy::parse_risk(risk);
    if (!r) throw ParseError("unknown risk level '" + risk + "'");
    schedule = energy::policy_step(*r, std::nullopt, false, cfg.policy).schedule;
  }
  const auto e = energy::estimate_energy(schedule, sensor);
  json segments = json::array();
  for (const auto &s : schedule.segments) segments.push_back({{"mode", s.mode}, {"duration", s.duration}});
  json doc = {{"meta", meta("energy", cfg)},
              {"sensor", sensor.name},
              {"frame_length", schedule.frame_length},
              {"segments", segments},
              {"average_ua", e.average_ua},
              {"charge_uas", e.charge_uas}};
  if (!out.empty()) write_text(out, dump(doc));
  std::cout << sensor.name << " average " << io::format_number(e.average_ua) << " uA, charge "
            << io::format_number(e.charge_uas) << " uA*s per frame\n";
  return 0;
}

int cmd_profile_init(const Selection &sel, const std::string &user, const std::string &existing,
                     const std::string &out, const cli::RunConfig &cfg) {
  auth::ActivityProfile profile;
  profile.user_id = user;
  if (!existing.empty()) profile = read_profile(existing);
  const auto rec = select_recording(sel);
  profile = auth::with_recording(profile, rec, cfg.auth);
  const auto &e = profile.entries.at(rec.label);
  write_text(out, dump(auth::profile_to_json(profile, meta("profile init", cfg, {{"input", sel.input}}))));
  std::cout << "profile " << profile.user_id << ": " << to_string(rec.label) << " period "
            << io::format_number(e.period) << ", " << e.observation_count << " cycles\n";
  return 0;
}

int cmd_profile_update(const std::string &profile_path, const Selection &sel, std::size_t begin, std::size_t length,
                       const std::string &out, const cli::RunConfig &cfg) {
  const auto profile = read_profile(profile_path);
  const auto w = window_of(sel, begin, length ? length : cfg.auth.window_length);
  const auto d = auth::authenticate(w, profile, cfg.auth);
  std::cout << to_string(d.verdict) << " coverage " << io::format_number(d.coverage_ratio) << "\n";
  const auto updated = auth::accept_and_update(w, d, profile, cfg.auth);
  write_text(out.empty() ? profile_path : out,
             dump(auth::profile_to_json(updated, meta("profile update", cfg, {{"input", sel.input}, {"begin", begin}}))));
  return 0;
}

int cmd_profile_show(const std::string &profile_path) {
  const auto p = read_profile(profile_path);
  json entries = json::array();
  for (const auto &[label, e] : p.entries) {
    json sigma = json::array(), singular = json::array();
    for (std::size_t a = 0; a < 3; ++a) {
      sigma.push_back(e.axis_models[a].noise_sigma);
      singular.push_back(e.singularities[a].windows.size());
    }
    entries.push_back({{"activity", to_string(label)},
                       {"period", e.period},
                       {"order", e.order},
                       {"observation_count", e.observation_count},
                       {"buffer_samples", e.buffer_t.size()},
                       {"noise_sigma", sigma},
                       {"singularities", singular},
                       {"novelty_threshold", e.novelty.threshold}});
  }
  std::cout << dump({{"user_id", p.user_id}, {"entries", entries}});
  return 0;
}

int cmd_synth(const std::string &activity, std::size_t samples, std::size_t cycles, double amplitude, double noise,
              double spike_rate, const std::string &subject, const std::string &out, const cli::RunConfig &cfg) {
  synth::ActivitySynth g;
  g.activity = activity_arg(activity);
  g.seed = cfg.seed;
  g.amplitude_scale = amplitude;
  g.noise = noise;
  g.spike_rate = spike_rate;
  auto rec = cycles ? g.cycles(cycles) : g.samples(samples);
  if (!subject.empty()) rec.subject_id = subject;
  std::ostringstream csv;
  io::write_csv(csv, {rec});
  if (out.empty())
    std::cout << csv.str();
  else
    write_text(out, csv.str());
  std::cerr << "synthesized " << rec.size() << " samples, period " << io::format_number(g.period()) << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Activity-cycle forecasting and continuous authentication"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  cli::Overrides ov;
  std::string out;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", ov.seed, "Random seed");
  app.add_option("--level", ov.level, "Prediction band level");
  app.add_option("--te-threshold", ov.te_threshold, "Tolerable-error coverage threshold");
  app.add_option("--horizon", ov.horizon, "Forecast horizon in samples");
  app.add_option("--out", out, "Output file or directory");

  Selection sel;
  auto add_selection = [&](CLI::App *c) {
    c->add_option("--input", sel.input, "Recording CSV")->required();
    c->add_option("--activity", sel.activity, "Activity label")->required();
    c->add_option("--subject", sel.subject, "Subject id (default: first match)");
  };
  std::size_t begin = 0, length = 0;
  auto add_window = [&](CLI::App *c) {
    c->add_option("--begin", begin, "First sample of the window");
    c->add_option("--length", length, "Window length (default from config)");
  };

  auto *fit = app.add_subcommand("fit", "Fit per-axis forecast models");
  add_selection(fit);
  std::string model_path;
  auto *predict = app.add_subcommand("predict", "Forecast from a model file");
  predict->add_option("--model", model_path, "Model JSON")->required();
  auto *crossval = app.add_subcommand("crossval", "Rolling-origin cross-validation");
  add_selection(crossval);
  std::string profile_path;
  auto *authc = app.add_subcommand("auth", "Judge one window against a profile");
  authc->add_option("--profile", profile_path, "Profile JSON")->required();
  add_selection(authc);
  add_window(authc);
  std::string scenario_path;
  auto *simulate = app.add_subcommand("simulate", "Replay a scenario with energy accounting");
  simulate->add_option("--profile", profile_path, "Profile JSON")->required();
  simulate->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  std::optional<double> duty;
  std::string risk = "regular";
  auto *energyc = app.add_subcommand("energy", "Average sensor current of a schedule");
  energyc->add_option("--duty", duty, "Active fraction of the frame");
  energyc->add_option("--risk", risk, "Use the policy schedule of this risk level");
  std::string sensor;
  for (auto *c : {simulate, energyc}) c->add_option("--sensor", sensor, "Sensor name");

  auto *profile = app.add_subcommand("profile", "Manage owner profiles");
  profile->require_subcommand(1);
  std::string user = "owner", existing;
  auto *pinit = profile->add_subcommand("init", "Create a profile entry from a recording");
  add_selection(pinit);
  pinit->add_option("--user", user, "User id");
  pinit->add_option("--profile", existing, "Existing profile to extend");
  auto *pupdate = profile->add_subcommand("update", "Authenticate a window and fold it in when accepted");
  pupdate->add_option("--profile", profile_path, "Profile JSON")->required();
  add_selection(pupdate);
  add_window(pupdate);
  auto *pshow = profile->add_subcommand("show", "Summarize a profile");
  pshow->add_option("--profile", profile_path, "Profile JSON")->required();

  std::string synth_activity = "jumping", subject = "synthetic";
  std::size_t samples = 1000, cycles = 0;
  double amplitude = 1.0, noise = 0.05, spike_rate = 0.0;
  auto *synthc = app.add_subcommand("synth", "Generate a synthetic recording");
  synthc->add_option("--activity", synth_activity, "Activity label");
  synthc->add_option("--samples", samples, "Number of samples");
  synthc->add_option("--cycles", cycles, "Whole cycles instead of --samples");
  synthc->add_option("--amplitude", amplitude, "Amplitude scale");
  synthc->add_option("--noise", noise, "Noise relative to axis amplitude");
  synthc->add_option("--spike-rate", spike_rate, "Singularity spikes per sample");
  synthc->add_option("--subject", subject, "Subject id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    auto cfg = cli::resolve_config(config_path, ov);
    if (!sensor.empty()) cfg.sensor = sensor;
    if (*fit) {
      if (out.empty()) throw ParseError("fit needs --out DIR");
      return cmd_fit(sel, out, cfg);
    }
    if (*predict) return cmd_predict(model_path, out, cfg);
    if (*crossval) return cmd_crossval(sel, out, cfg);
    if (*authc) return cmd_auth(profile_path, sel, begin, length, out, cfg);
    if (*simulate) return cmd_simulate(profile_path, scenario_path, out, cfg);
    if (*energyc) return cmd_energy(duty, risk, out, cfg);
    if (*pinit) {
      if (out.empty()) throw ParseError("profile init needs --out FILE");
      return cmd_profile_init(sel, user, existing, out, cfg);
    }
    if (*pupdate) return cmd_profile_update(profile_path, sel, begin, length, out, cfg);
    if (*pshow) return cmd_profile_show(profile_path);
    if (*synthc)
      return cmd_synth(synth_activity, samples, cycles, amplitude, noise, spike_rate, subject, out, cfg);
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
