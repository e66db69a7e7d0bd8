#include "doctest.h"

#include "cycleauth/energy/policy.hpp"
#include "cycleauth/errors.hpp"

#include <algorithm>
#include <fstream>
#include <random>

using namespace cycleauth;
using namespace cycleauth::energy;
using auth::Verdict;

namespace {

const SensorPowerProfile &bma220() { return find_profile(default_profiles(), "BMA220"); }

} // namespace

TEST_CASE("BMA220 reference currents") {
  CHECK(estimate_energy(duty_schedule(60.0, 1.0), bma220()).average_ua == 250.0);
  CHECK(estimate_energy(duty_schedule(60.0, 0.0), bma220()).average_ua == 1.0);
  auto split = estimate_energy(duty_schedule(60.0, 0.1), bma220());
  CHECK(split.average_ua == doctest::Approx(25.9).epsilon(1e-12));
  CHECK(split.charge_uas == doctest::Approx(25.9 * 60.0).epsilon(1e-12));
}

TEST_CASE("hand-built schedule") {
  DutyCycleSchedule s{10.0, {{"normal", 2.0}, {"low_power", 3.0}, {"suspend", 5.0}}};
  auto e = estimate_energy(s, bma220());
  CHECK(e.charge_uas == doctest::Approx(2 * 250.0 + 3 * 10.0 + 5 * 1.0));
  CHECK(e.average_ua == doctest::Approx(53.5));
  CHECK(s.fraction("low_power") == doctest::Approx(0.3));
}

TEST_CASE("energy contracts") {
  CHECK_THROWS_AS(estimate_energy(duty_schedule(60.0, 0.5), find_profile(default_profiles(), "BMA280")), ProfileMismatch);
  CHECK_THROWS_AS(estimate_energy(DutyCycleSchedule{10.0, {{"normal", 4.0}}}, bma220()), DataError);
  CHECK_THROWS_AS(estimate_energy(DutyCycleSchedule{10.0, {{"normal", -1.0}, {"suspend", 11.0}}}, bma220()), DataError);
  CHECK_THROWS_AS(find_profile(default_profiles(), "nope"), ProfileMismatch);
  CHECK_THROWS_AS(duty_schedule(60.0, 1.5), DataError);

  SensorPowerProfile bad{"x", "", {{"normal", 5.0}, {"suspend", 6.0}}};
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad.mode_currents = {{"normal", 5.0}, {"low_power", 0.0}};
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad.mode_currents = {{"turbo", 5.0}};
  CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("sensor table rows") {
  const auto &t = default_profiles();
  REQUIRE(t.size() == 6);
  CHECK(find_profile(t, "MPU-6050").current("low_power@40Hz") == 110.0);
  CHECK(find_profile(t, "MPU-6500").current("low_power@1.25Hz") == 10.0);
  CHECK(find_profile(t, "MPU-6500").current("normal") == 500.0);
  CHECK(find_profile(t, "BMA280").current("low_power") == 6.5);
  CHECK(find_profile(t, "BMA253").current("normal") == 14.5);
  CHECK(find_profile(t, "ADXL362").current("normal@400Hz") == 3.0);
  CHECK(find_profile(t, "ADXL362").current("suspend") == 0.01);
  auto adxl = duty_schedule(60.0, 0.5, "normal@100Hz", "suspend");
  CHECK(estimate_energy(adxl, find_profile(t, "ADXL362")).average_ua == doctest::Approx(0.905));
}

TEST_CASE("shipped JSON table matches the built-in table") {
  std::ifstream in(CYCLEAUTH_DATA_DIR "/sensors.json");
  REQUIRE(in);
  auto loaded = profiles_from_json(nlohmann::json::parse(in));
  CHECK(profiles_to_json(loaded) == profiles_to_json(default_profiles()));
  CHECK_THROWS_AS(profiles_from_json(nlohmann::json::parse(R"({"schema_version":1,"sensors":[{"name":"a"}]})")),
                  ParseError);
}

TEST_CASE("energy grows with normal-mode duty") {
  for (const auto &p : default_profiles()) {
    const std::string active = p.mode_currents.count("normal") ? "normal" : "normal@100Hz";
    const std::string sleep = std::min_element(p.mode_currents.begin(), p.mode_currents.end(), [](auto &a, auto &b) {
                                return a.second < b.second;
                              })->first;
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
      double avg = estimate_energy(duty_schedule(60.0, i / 20.0, active, sleep), p).average_ua;
      CHECK(avg >= prev);
      prev = avg;
    }
  }
}

TEST_CASE("policy table examples") {
  auto a = policy_step(RiskLevel::low, Verdict::accept, true);
  CHECK(a.risk == RiskLevel::low);
  CHECK(a.schedule.fraction("normal") == doctest::Approx(0.05));
  auto b = policy_step(RiskLevel::regular, Verdict::reject, false);
  CHECK(b.risk == RiskLevel::lockdown);
  CHECK(b.schedule.fraction("normal") == 1.0);
  CHECK(policy_step(RiskLevel::regular, Verdict::escalate, false).risk == RiskLevel::elevated);
  CHECK(policy_step(RiskLevel::elevated, std::nullopt, false).risk == RiskLevel::elevated);
  CHECK(policy_step(RiskLevel::lockdown, Verdict::escalate, false).risk == RiskLevel::lockdown);

  PolicyConfig idle;
  idle.idle_duty = 0.01;
  CHECK(policy_step(RiskLevel::low, std::nullopt, true, idle).schedule.fraction("suspend") == doctest::Approx(0.99));
  CHECK(policy_step(RiskLevel::low, std::nullopt, false, idle).schedule.fraction("normal") == doctest::Approx(0.05));
  CHECK(policy_step(RiskLevel::low, std::nullopt, true, idle, true).schedule.fraction("normal") == 1.0);
}

TEST_CASE("policy monotonicity and lockdown absorption") {
  const std::optional<Verdict> decisions[] = {std::nullopt, Verdict::accept, Verdict::escalate, Verdict::reject};
  for (auto d : decisions)
    for (bool idle : {false, true})
      for (int r = 0; r < 3; ++r)
        CHECK(int(policy_step(RiskLevel(r), d, idle).risk) <= int(policy_step(RiskLevel(r + 1), d, idle).risk));
  for (auto d : decisions) {
    auto out = policy_step(RiskLevel::lockdown, d, false).risk;
    if (d == Verdict::accept)
      CHECK(out == RiskLevel::elevated);
    else
      CHECK(out == RiskLevel::lockdown);
  }
}

TEST_CASE("simulated day matches a replay of the transition table") {
  // One frame per minute, decisions alternating accept / escalate with idle nights.
  const double duty[] = {0.05, 0.10, 0.50, 1.0};
  std::mt19937_64 rng(17);
  RiskLevel risk = RiskLevel::regular;
  int level = 1;
  double charge = 0.0, expected = 0.0;
  for (int minute = 0; minute < 24 * 60; ++minute) {
    const bool idle = minute < 6 * 60;
    std::optional<Verdict> d;
    if (!idle) d = (minute % 2 == 0) ? Verdict::accept : Verdict::escalate;
    if (!idle && rng() % 50 == 0) d = Verdict::reject;
    auto out = policy_step(risk, d, idle);
    risk = out.risk;
    charge += estimate_energy(out.schedule, bma220()).charge_uas;

    if (d == Verdict::accept) level = std::max(0, level - 1);
    if (d == Verdict::escalate) level = std::min(3, level + 1);
    if (d == Verdict::reject) level = 3;
    const double f = duty[level];
    expected += 60.0 * (f * 250.0 + (1.0 - f) * 1.0);
    CHECK(int(risk) == level);
  }
  CHECK(charge / (24 * 3600.0) == doctest::Approx(expected / (24 * 3600.0)).epsilon(1e-12));
}

TEST_CASE("policy config JSON") {
  PolicyConfig c;
  c.duty[2] = 0.4;
  c.active_mode = "normal@100Hz";
  auto back = policy_config_from_json(policy_config_to_json(c));
  CHECK(policy_config_to_json(back) == policy_config_to_json(c));
  CHECK_THROWS_AS(policy_config_from_json({{"duty", {{"panic", 0.2}}}}), ParseError);
  CHECK_THROWS_AS(policy_config_from_json({{"duty", {{"low", 1.2}}}}), ParseError);
  CHECK(parse_risk("elevated") == RiskLevel::elevated);
  CHECK_FALSE(parse_risk("high"));
}
