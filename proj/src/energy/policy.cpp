#include "cycleauth/energy/policy.hpp"

#include "cycleauth/errors.hpp"

#include <algorithm>

namespace cycleauth::energy {

std::string_view to_string(RiskLevel r) {
  switch (r) {
  case RiskLevel::low: return "low";
  case RiskLevel::regular: return "regular";
  case RiskLevel::elevated: return "elevated";
  case RiskLevel::lockdown: return "lockdown";
  }
  return "lockdown";
}

std::optional<RiskLevel> parse_risk(std::string_view s) {
  for (auto r : {RiskLevel::low, RiskLevel::regular, RiskLevel::elevated, RiskLevel::lockdown})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

PolicyOutcome policy_step(RiskLevel risk, std::optional<auth::Verdict> last_decision, bool idle_context,
                          const PolicyConfig &config, bool spot_check) {
  int level = int(risk);
  if (last_decision) {
    switch (*last_decision) {
    case auth::Verdict::accept: level = std::max(0, level - 1); break;
    case auth::Verdict::escalate: level = std::min(3, level + 1); break;
    case auth::Verdict::reject: level = 3; break;
    }
  }
  PolicyOutcome out;
  out.risk = RiskLevel(level);
  double duty = config.duty[std::size_t(level)];
  if (idle_context && out.risk == RiskLevel::low) duty = config.idle_duty;
  if (spot_check) duty = 1.0;
  out.schedule = duty_schedule(config.frame_length, duty, config.active_mode, config.sleep_mode);
  return out;
}

nlohmann::json policy_config_to_json(const PolicyConfig &c) {
  return {{"duty",
           {{"low", c.duty[0]}, {"regular", c.duty[1]}, {"elevated", c.duty[2]}, {"lockdown", c.duty[3]}}},
          {"idle_duty", c.idle_duty},
          {"frame_length", c.frame_length},
          {"active_mode", c.active_mode},
          {"sleep_mode", c.sleep_mode},
          {"spot_check_probability", c.spot_check_probability}};
}

PolicyConfig policy_config_from_json(const nlohmann::json &doc, PolicyConfig c) {
  try {
    if (doc.contains("duty"))
      for (const auto &[key, value] : doc["duty"].items()) {
        auto r = parse_risk(key);
        if (!r) throw ParseError("unknown risk level '" + key + "'");
        c.duty[std::size_t(*r)] = value.get<double>();
      }
    c.idle_duty = doc.value("idle_duty", c.idle_duty);
    c.frame_length = doc.value("frame_length", c.frame_length);
    c.active_mode = doc.value("active_mode", c.active_mode);
    c.sleep_mode = doc.value("sleep_mode", c.sleep_mode);
    c.spot_check_probability = doc.value("spot_check_probability", c.spot_check_probability);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("malformed policy configuration: ") + e.what());
  }
  for (double d : c.duty)
    if (!(d >= 0.0 && d <= 1.0)) throw ParseError("duty fractions must lie in [0, 1]");
  if (!(c.idle_duty >= 0.0 && c.idle_duty <= 1.0)) throw ParseError("idle duty must lie in [0, 1]");
  if (!(c.frame_length > 0.0)) throw ParseError("frame length must be positive");
  return c;
}

} // namespace cycleauth::energy
