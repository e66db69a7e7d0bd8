#include "doctest.h"

#include "auth_fixtures.hpp"

#include "cycleauth/errors.hpp"
#include "cycleauth/sim/scenario.hpp"

using namespace cycleauth;
using namespace cycleauth::sim;

namespace {

Scenario repeated(StepKind kind, int n) {
  Scenario s;
  s.seed = 5;
  for (int i = 0; i < n; ++i) s.steps.push_back({60.0 * i, kind});
  return s;
}

const energy::SensorPowerProfile &bma220() { return energy::find_profile(energy::default_profiles(), "BMA220"); }

} // namespace

TEST_CASE("empty scenario has zero totals") {
  auto r = simulate(fixtures::owner_profile(), Scenario{}, bma220());
  CHECK(r.log.empty());
  CHECK(r.totals.steps == 0);
  CHECK(r.totals.accept_rate == 0.0);
  CHECK(r.totals.average_ua == 0.0);
  CHECK(r.totals.charge_uas == 0.0);
}

TEST_CASE("owner scenario is accepted and cheap") {
  auto r = simulate(fixtures::owner_profile(), repeated(StepKind::owner, 30), bma220());
  CHECK(r.totals.accept_rate >= 0.9);
  const double regular = energy::estimate_energy(energy::duty_schedule(60.0, 0.10), bma220()).average_ua;
  CHECK(r.totals.average_ua < regular);
  CHECK_FALSE(r.totals.first_lockdown);
}

TEST_CASE("impostor scenario reaches lockdown quickly") {
  auto r = simulate(fixtures::owner_profile(), repeated(StepKind::impostor, 6), bma220());
  REQUIRE(r.totals.first_lockdown);
  CHECK(*r.totals.first_lockdown <= 3);
  CHECK(r.totals.average_ua > 200.0);
}

TEST_CASE("lockdown costs more than regular monitoring") {
  auto p = fixtures::owner_profile();
  auto lock = simulate(p, repeated(StepKind::impostor, 10), bma220());
  SimConfig cfg;
  auto idle = simulate(p, repeated(StepKind::idle, 10), bma220(), cfg);
  CHECK(lock.totals.average_ua > idle.totals.average_ua);
  CHECK(idle.totals.average_ua == doctest::Approx(25.9));
}

TEST_CASE("simulation is deterministic and retraining grows the profile") {
  auto p = fixtures::owner_profile();
  auto s = repeated(StepKind::owner, 4);
  s.steps.push_back({240.0, StepKind::impostor});
  SimConfig cfg;
  cfg.retrain = true;
  auto a = simulate(p, s, bma220(), cfg), b = simulate(p, s, bma220(), cfg);
  CHECK(sim_log_json(a).dump() == sim_log_json(b).dump());
  CHECK(sim_totals_json(a.totals).dump() == sim_totals_json(b.totals).dump());
  CHECK(a.final_profile.entries.at(Activity::jumping).observation_count ==
        p.entries.at(Activity::jumping).observation_count + a.totals.accepts);
}

TEST_CASE("spot checks force full-duty frames") {
  SimConfig cfg;
  cfg.policy.spot_check_probability = 1.0;
  auto r = simulate(fixtures::owner_profile(), repeated(StepKind::idle, 3), bma220(), cfg);
  for (const auto &l : r.log) {
    CHECK(l.spot_check);
    CHECK(l.duty == 1.0);
    CHECK(l.risk_after == energy::RiskLevel::regular);
  }
}

TEST_CASE("scenario JSON") {
  auto s = scenario_from_json(nlohmann::json::parse(R"({"activity":"jumping","seed":3,"steps":[
    {"t":0,"kind":"owner","noise":0.5},{"t":60,"kind":"impostor","amplitude":3},{"t":120,"kind":"idle"},
    {"t":180,"kind":"window","samples":{"x":[1,2,3,4],"y":[1,2,3,4],"z":[0,0,0,0]}}]})"));
  REQUIRE(s.steps.size() == 4);
  CHECK(s.steps[0].noise == 0.5);
  CHECK(s.steps[1].amplitude == 3.0);
  CHECK(s.steps[3].window->size() == 4);
  CHECK(scenario_from_json(scenario_to_json(s)).steps.size() == 4);
  CHECK(scenario_to_json(scenario_from_json(scenario_to_json(s))) == scenario_to_json(s));

  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::array()), ParseError);
  CHECK_THROWS_AS(scenario_from_json({{"steps", {{{"t", 0}, {"kind", "dance"}}}}}), ParseError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(
                      R"({"steps":[{"t":0,"kind":"window","samples":{"x":[1],"y":[1,2],"z":[1]}}]})")),
                  ParseError);
}
