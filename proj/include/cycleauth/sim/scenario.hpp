#pragma once

#include "cycleauth/auth/profile.hpp"
#include "cycleauth/energy/policy.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <vector>

namespace cycleauth::sim {

enum class StepKind {
  /// Window resampled from the owner's own models.
  owner,
  /// Same activity by someone else, amplitude scaled.
  impostor,
  /// No motion observed; no decision.
  idle,
  /// Explicit samples carried in the scenario.
  window,
};

struct ScenarioStep {
  double t = 0.0;
  StepKind kind = StepKind::idle;
  /// Owner noise as a multiple of the model's noise sigma.
  double noise = 1.0;
  double amplitude = 2.5;
  std::optional<auth::ActivityWindow> window;
};

struct Scenario {
  Activity activity = Activity::jumping;
  std::uint64_t seed = 1;
  std::size_t window_length = 100;
  std::vector<ScenarioStep> steps;
};

/// Throws ParseError on malformed input.
Scenario scenario_from_json(const nlohmann::json &doc);
nlohmann::json scenario_to_json(const Scenario &s);

struct SimConfig {
  auth::AuthConfig auth;
  energy::PolicyConfig policy;
  energy::RiskLevel initial_risk = energy::RiskLevel::regular;
  /// Fold accepted windows back into the profile.
  bool retrain = false;
};

struct StepLog {
  double t = 0.0;
  StepKind kind = StepKind::idle;
  std::optional<auth::AuthDecision> decision;
  energy::RiskLevel risk_before = energy::RiskLevel::regular;
  energy::RiskLevel risk_after = energy::RiskLevel::regular;
  bool spot_check = false;
  double duty = 0.0;
  energy::EnergyEstimate energy;
};

struct SimTotals {
  std::size_t steps = 0;
  std::size_t decisions = 0;
  std::size_t accepts = 0;
  std::size_t escalations = 0;
  std::size_t rejects = 0;
  /// accepts / decisions, 0 without decisions.
  double accept_rate = 0.0;
  double duration_s = 0.0;
  double charge_uas = 0.0;
  double average_ua = 0.0;
  /// 1-based step at which lockdown was first reached.
  std::optional<std::size_t> first_lockdown;
};

struct SimResult {
  std::vector<StepLog> log;
  SimTotals totals;
  auth::ActivityProfile final_profile;
};

/// Replays authenticate, policy_step and estimate_energy for every step. The
/// energy of a step is that of the frame scheduled by its policy outcome.
SimResult simulate(const auth::ActivityProfile &profile, const Scenario &scenario,
                   const energy::SensorPowerProfile &sensor, const SimConfig &config = {});

nlohmann::json sim_log_json(const SimResult &r);
nlohmann::json sim_totals_json(const SimTotals &t);

std::string_view to_string(StepKind k);

} // namespace cycleauth::sim
