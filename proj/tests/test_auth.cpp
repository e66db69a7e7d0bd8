#include "doctest.h"

#include "auth_fixtures.hpp"

#include "cycleauth/errors.hpp"

#include <numbers>

using namespace cycleauth;
using namespace cycleauth::auth;

namespace {

ActivityWindow constant_window(double v, std::size_t n, double t0 = 0.0) {
  ActivityWindow w;
  w.label = Activity::jumping;
  for (auto &ax : w.axes) {
    ax.t = Eigen::VectorXd::LinSpaced(Eigen::Index(n), t0, t0 + double(n) - 1.0);
    ax.y = Eigen::VectorXd::Constant(Eigen::Index(n), v);
  }
  return w;
}

} // namespace

TEST_CASE("features of a constant window") {
  auto f = extract_features(constant_window(9.8, 100));
  REQUIRE(f.size() == kFeatureCount);
  for (int a = 0; a < 3; ++a) {
    CHECK(f[a * kFeaturesPerAxis + 0] == doctest::Approx(9.8));
    CHECK(f[a * kFeaturesPerAxis + 1] == doctest::Approx(0.0));
    CHECK(f[a * kFeaturesPerAxis + 5] == 0.0);
    CHECK(f[a * kFeaturesPerAxis + 6] == 0.0);
  }
  CHECK(f.allFinite());
}

TEST_CASE("dominant period of a single tone") {
  auto w = constant_window(0.0, 200);
  for (Eigen::Index i = 0; i < 200; ++i) w.axes[0].y[i] = std::sin(2 * std::numbers::pi * double(i) / 50.0);
  auto f = extract_features(w);
  CHECK(f[4] == doctest::Approx(50.0).epsilon(0.01));
  CHECK(f[3] == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("feature extraction is deterministic and offset free") {
  synth::ActivitySynth g;
  auto rec = g.samples(300);
  auto w = ActivityWindow::from_recording(rec, 50, 150);
  auto a = extract_features(w), b = extract_features(w);
  CHECK(a == b);
  for (auto &ax : w.axes) ax.t.array() += 12345.0;
  CHECK(extract_features(w) == a);
}

TEST_CASE("feature extraction contracts") {
  CHECK_THROWS_AS(extract_features(constant_window(1.0, 3)), TooShort);
  auto w = constant_window(1.0, 10);
  w.axes[1].t[3] += 0.5;
  CHECK_THROWS_AS(extract_features(w), DataError);
}

TEST_CASE("novelty on identical windows") {
  std::vector<ActivityWindow> ws(5, constant_window(2.0, 50));
  for (Eigen::Index i = 0; i < 50; ++i) ws[0].axes[0].y[i] += std::sin(double(i));
  for (auto &w : ws) w = ws[0];
  auto m = train_novelty(ws);
  for (const auto &w : ws) CHECK(m.passes(m.score(w)));
}

TEST_CASE("novelty training contracts") {
  std::vector<ActivityWindow> ws(5, constant_window(2.0, 50));
  CHECK_THROWS_AS(train_novelty(std::vector<ActivityWindow>(ws.begin(), ws.begin() + 4)), TrainingContract);
  ws[2].label = Activity::running;
  CHECK_THROWS_AS(train_novelty(ws), TrainingContract);
}

TEST_CASE("novelty separates activities with very different amplitude") {
  synth::ActivitySynth jump;
  jump.seed = 4;
  auto rec = jump.samples(1000);
  std::vector<ActivityWindow> ws;
  for (std::size_t b = 0; b + 100 <= rec.size(); b += 25) ws.push_back(ActivityWindow::from_recording(rec, b, b + 100));
  auto m = train_novelty(ws);

  std::size_t above = 0;
  for (const auto &w : ws) above += m.passes(m.score(w));
  CHECK(double(above) >= 0.95 * double(ws.size()));

  synth::ActivitySynth run;
  run.activity = Activity::running;
  run.amplitude_scale = 3.0;
  auto other = run.samples(400);
  for (std::size_t b = 0; b + 100 <= other.size(); b += 50) {
    auto w = ActivityWindow::from_recording(other, b, b + 100);
    w.label = Activity::jumping;
    CHECK_FALSE(m.passes(m.score(w)));
  }

  auto shifted = ws[3];
  for (auto &ax : shifted.axes) ax.t.array() -= 77.0;
  CHECK(m.score(shifted) == m.score(ws[3]));
}

TEST_CASE("cycle counting and cold start") {
  CHECK(count_cycles(250, 50.0) == 5);
  CHECK(count_cycles(250, 52.0) == 5);
  CHECK(count_cycles(200, 50.0) == 4);
  CHECK(count_cycles(10, 0.0) == 0);
  for (Activity act : kKnownActivities)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      synth::ActivitySynth g;
      g.activity = act;
      g.seed = seed;
      CAPTURE(to_string(act));
      CAPTURE(seed);
      CHECK_NOTHROW(make_entry(g.cycles(5)));
      CHECK_THROWS_AS(make_entry(g.cycles(4)), ColdStart);
    }
  synth::ActivitySynth tiny;
  CHECK_THROWS_AS(make_entry(tiny.samples(15)), ColdStart);
}

TEST_CASE("entry contents") {
  auto p = fixtures::owner_profile();
  const auto &e = p.entries.at(Activity::jumping);
  CHECK(std::abs(e.period - 50.0) < 2.5);
  CHECK(e.order == 10);
  CHECK(e.observation_count == count_cycles(1000, e.period));
  CHECK(e.buffer_t.size() == 1000);
  for (std::size_t a = 0; a < 3; ++a) CHECK(e.singularities[a].windows.size() == e.axis_models[a].events.windows.size());
}

TEST_CASE("parallel axis fits match a sequential fit") {
  synth::ActivitySynth g;
  auto rec = g.samples(600);
  auto e = make_entry(rec);
  forecast::FitConfig cfg;
  cfg.seasonalities = {{e.period, e.order}};
  for (int a = 0; a < 3; ++a) {
    auto m = forecast::fit(rec.axis_series(a), cfg);
    CHECK(m.trend.rate == e.axis_models[std::size_t(a)].trend.rate);
    CHECK(m.seasonalities[0].coeffs == e.axis_models[std::size_t(a)].seasonalities[0].coeffs);
    CHECK(m.noise_sigma == e.axis_models[std::size_t(a)].noise_sigma);
  }
}

TEST_CASE("self-consistent window is accepted with full coverage") {
  auto p = fixtures::owner_profile();
  const auto &e = p.entries.at(Activity::jumping);
  std::mt19937_64 rng(1);
  for (double offset : {0.0, 13.0, 37.0}) {
    auto d = authenticate(fixtures::model_window(e, Activity::jumping, offset, 0.0, rng), p);
    CHECK(d.coverage_ratio == 1.0);
    CHECK(d.verdict == Verdict::accept);
    CHECK(d.matched == Activity::jumping);
    CHECK(d.aligned_t.front() == doctest::Approx(e.axis_models[0].t_max + 1.0 + offset));
  }
}

TEST_CASE("window of zeros is rejected") {
  auto p = fixtures::owner_profile();
  auto d = authenticate(constant_window(0.0, 100, 5000.0), p);
  CHECK(d.verdict == Verdict::reject);
  for (double c : d.axis_coverage) CHECK(c < 0.1);
}

TEST_CASE("doubled noise escalates") {
  auto p = fixtures::owner_profile();
  const auto &e = p.entries.at(Activity::jumping);
  std::mt19937_64 rng(9);
  int escalated = 0, accepted = 0;
  for (int i = 0; i < 40; ++i) {
    auto d = authenticate(fixtures::model_window(e, Activity::jumping, double(i), 2.0, rng), p);
    escalated += d.verdict == Verdict::escalate;
    accepted += d.verdict == Verdict::accept;
  }
  CHECK(escalated >= 30);
  CHECK(accepted == 0);
}

TEST_CASE("owner and impostor frequencies") {
  for (Activity act : {Activity::jumping, Activity::walking}) {
    auto p = fixtures::owner_profile(act, 5);
    const auto &e = p.entries.at(act);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 150.0);
    int owner_ok = 0, impostor_blocked = 0;
    const int trials = 50;
    for (int i = 0; i < trials; ++i) {
      owner_ok += authenticate(fixtures::model_window(e, act, std::floor(u(rng)), 1.0, rng), p).verdict == Verdict::accept;
      auto imp = fixtures::impostor_window(act, 2.5, 500 + std::uint64_t(i), std::size_t(u(rng)));
      impostor_blocked += authenticate(imp, p).verdict != Verdict::accept;
    }
    CHECK(owner_ok >= 45);
    CHECK(impostor_blocked == trials);
  }
}

TEST_CASE("authenticate is pure and deterministic") {
  auto p = fixtures::owner_profile();
  const auto before = profile_to_json(p).dump();
  std::mt19937_64 rng(2);
  auto w = fixtures::model_window(p.entries.at(Activity::jumping), Activity::jumping, 5.0, 1.0, rng);
  auto a = authenticate(w, p), b = authenticate(w, p);
  CHECK(decision_to_json(a) == decision_to_json(b));
  CHECK(a.aligned_t == b.aligned_t);
  CHECK(profile_to_json(p).dump() == before);
}

TEST_CASE("raising the TE threshold never turns reject into accept") {
  auto p = fixtures::owner_profile();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    auto w = i % 2 ? fixtures::model_window(p.entries.at(Activity::jumping), Activity::jumping, i, 1.5 + i * 0.3, rng)
                   : fixtures::impostor_window(Activity::jumping, 1.0 + 0.3 * i, 80 + std::uint64_t(i), 40);
    AuthConfig cfg;
    Verdict prev = Verdict::accept;
    for (double te : {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
      cfg.te_threshold = te;
      auto v = authenticate(w, p, cfg).verdict;
      if (prev == Verdict::reject) CHECK(v == Verdict::reject);
      if (prev != Verdict::accept) CHECK(v != Verdict::accept);
      prev = v;
    }
  }
}

TEST_CASE("authenticate contracts") {
  auto p = fixtures::owner_profile();
  auto w = constant_window(1.0, 100);
  w.label = Activity::running;
  CHECK_THROWS_AS(authenticate(w, p), ColdStart);
  CHECK_THROWS_AS(authenticate(constant_window(1.0, 30), p), TooShort);
  w.label = Activity::unknown;
  CHECK_THROWS_AS(authenticate(w, ActivityProfile{}), ColdStart);
}

TEST_CASE("unknown label picks the best novelty entry") {
  auto p = fixtures::owner_profile(Activity::jumping);
  synth::ActivitySynth walk;
  walk.activity = Activity::walking;
  walk.seed = 8;
  p = with_recording(p, walk.samples(1000));
  std::mt19937_64 rng(4);
  auto w = fixtures::model_window(p.entries.at(Activity::walking), Activity::unknown, 3.0, 1.0, rng);
  auto d = authenticate(w, p);
  CHECK(d.matched == Activity::walking);
  CHECK(d.verdict == Verdict::accept);
}

TEST_CASE("accept and update") {
  auto p = fixtures::owner_profile();
  const auto &e = p.entries.at(Activity::jumping);
  std::mt19937_64 rng(6);
  auto w = fixtures::model_window(e, Activity::jumping, 10.0, 1.0, rng);
  auto d = authenticate(w, p);
  REQUIRE(d.verdict == Verdict::accept);
  auto q = accept_and_update(w, d, p);
  const auto &f = q.entries.at(Activity::jumping);
  CHECK(f.observation_count == e.observation_count + 1);
  CHECK(f.buffer_t.size() == e.buffer_t.size() + 100);
  CHECK(f.buffer_t[1000] == d.aligned_t[0]);
  CHECK(p.entries.at(Activity::jumping).buffer_t.size() == 1000);

  auto rejected = d;
  rejected.verdict = Verdict::escalate;
  CHECK_THROWS_AS(accept_and_update(w, rejected, p), ContractViolation);
}

TEST_CASE("update with a repeat of the training data barely moves the model") {
  synth::ActivitySynth g;
  g.nominal_period = 50.0;
  g.period_jitter = 0.0;
  g.cycle_jitter = 0.0;
  g.noise = 0.0;
  auto rec = g.samples(500);
  auto p = with_recording({}, rec);
  const auto &e = p.entries.at(Activity::jumping);
  auto w = ActivityWindow::from_recording(rec, 400, 500);
  auto d = authenticate(w, p);
  REQUIRE(d.verdict == Verdict::accept);
  CHECK(d.aligned_t.front() == doctest::Approx(500.0).epsilon(1e-3));
  auto q = accept_and_update(w, d, p);
  std::vector<double> times(e.buffer_t.begin(), e.buffer_t.end());
  for (std::size_t a = 0; a < 3; ++a)
    CHECK(forecast::prediction_rmse(e.axis_models[a], q.entries.at(Activity::jumping).axis_models[a], times) < 1e-3);
}

TEST_CASE("buffer is capped at the most recent samples") {
  synth::ActivitySynth g;
  auto p = with_recording({}, g.samples(4950));
  const auto &e = p.entries.at(Activity::jumping);
  std::mt19937_64 rng(7);
  auto w = fixtures::model_window(e, Activity::jumping, 0.0, 0.5, rng);
  auto d = authenticate(w, p);
  REQUIRE(d.verdict == Verdict::accept);
  auto q = accept_and_update(w, d, p);
  const auto &f = q.entries.at(Activity::jumping);
  CHECK(f.buffer_t.size() == 5000);
  CHECK(f.buffer_t.front() == 50.0);
  CHECK(f.buffer_t.back() == d.aligned_t.back());
  for (const auto &ax : f.buffer) CHECK(ax.size() == 5000);
}

TEST_CASE("profile JSON round trip") {
  auto p = fixtures::owner_profile();
  nlohmann::json meta = {{"seed", 42}};
  auto doc = profile_to_json(p, meta);
  nlohmann::json back_meta;
  auto q = profile_from_json(nlohmann::json::parse(doc.dump()), &back_meta);
  CHECK(back_meta == meta);
  CHECK(profile_to_json(q, meta).dump() == doc.dump());
  std::mt19937_64 rng(8);
  auto w = fixtures::model_window(p.entries.at(Activity::jumping), Activity::jumping, 4.0, 1.0, rng);
  CHECK(decision_to_json(authenticate(w, p)) == decision_to_json(authenticate(w, q)));

  auto bad = doc;
  bad["schema_version"] = 7;
  CHECK_THROWS_AS(profile_from_json(bad), ParseError);
  bad = doc;
  bad["entries"][0]["activity"] = "flying";
  CHECK_THROWS_AS(profile_from_json(bad), ParseError);
  bad = doc;
  bad["entries"][0]["axis_models"].erase(2);
  CHECK_THROWS_AS(profile_from_json(bad), ParseError);
}

TEST_CASE("auth config JSON round trip") {
  AuthConfig c;
  c.te_threshold = 0.8;
  c.alignment = Alignment::absolute;
  c.predict.seed = 99;
  c.fit.n_changepoints = 3;
  auto back = auth_config_from_json(auth_config_to_json(c));
  CHECK(auth_config_to_json(back) == auth_config_to_json(c));
  CHECK_THROWS_AS(auth_config_from_json({{"alignment", "sideways"}}), ParseError);
}
