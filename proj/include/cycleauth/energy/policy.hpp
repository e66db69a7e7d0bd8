#pragma once

#include "cycleauth/auth/profile.hpp"
#include "cycleauth/energy/power.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace cycleauth::energy {

enum class RiskLevel { low, regular, elevated, lockdown };

std::string_view to_string(RiskLevel r);
std::optional<RiskLevel> parse_risk(std::string_view s);

struct PolicyConfig {
  /// Fraction of each frame in active mode, indexed by RiskLevel.
  std::array<double, 4> duty{0.05, 0.10, 0.50, 1.0};
  /// Duty used when the device is idle at low risk.
  double idle_duty = 0.05;
  double frame_length = 60.0;
  std::string active_mode = "normal";
  std::string sleep_mode = "suspend";
  /// Probability of an unscheduled full-duty frame; 0 disables spot checks.
  double spot_check_probability = 0.0;
};

struct PolicyOutcome {
  DutyCycleSchedule schedule;
  RiskLevel risk = RiskLevel::regular;
};

/// accept lowers risk one level, escalate raises one level, reject jumps to
/// lockdown, no decision keeps the level. `spot_check` forces a full-duty frame
/// without touching the risk level.
PolicyOutcome policy_step(RiskLevel risk, std::optional<auth::Verdict> last_decision, bool idle_context,
                          const PolicyConfig &config = {}, bool spot_check = false);

nlohmann::json policy_config_to_json(const PolicyConfig &c);
PolicyConfig policy_config_from_json(const nlohmann::json &doc, PolicyConfig base = {});

} // namespace cycleauth::energy
