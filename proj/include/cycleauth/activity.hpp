#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace cycleauth {

enum class Activity { walking, running, standing_up, sitting_down, lying_down, jumping, unknown };

inline constexpr std::array<Activity, 6> kKnownActivities = {
    Activity::walking,    Activity::running,    Activity::standing_up,
    Activity::sitting_down, Activity::lying_down, Activity::jumping};

inline std::string_view to_string(Activity a) {
  switch (a) {
  case Activity::walking: return "walking";
  case Activity::running: return "running";
  case Activity::standing_up: return "standing_up";
  case Activity::sitting_down: return "sitting_down";
  case Activity::lying_down: return "lying_down";
  case Activity::jumping: return "jumping";
  case Activity::unknown: return "unknown";
  }
  return "unknown";
}

/// Parses the snake_case label. "unknown" is accepted only when `allow_unknown`.
inline std::optional<Activity> parse_activity(std::string_view s, bool allow_unknown = false) {
  for (Activity a : kKnownActivities)
    if (s == to_string(a)) return a;
  if (allow_unknown && s == "unknown") return Activity::unknown;
  return std::nullopt;
}

} // namespace cycleauth
