#pragma once

#include "cycleauth/auth/novelty.hpp"
#include "cycleauth/forecast/model.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace cycleauth::auth {

/// Everything learned about one activity of the owner.
struct ProfileEntry {
  double period = 0.0;
  int order = 1;
  std::array<forecast::ForecastModel, 3> axis_models;
  NoveltyModel novelty;
  /// Singularity windows detected per axis, as fitted into axis_models.
  std::array<forecast::EventTerm, 3> singularities;
  std::size_t observation_count = 0;
  /// Training buffer; time stamps shared by the three axes.
  std::vector<double> buffer_t;
  std::array<std::vector<double>, 3> buffer;
};

struct ActivityProfile {
  std::string user_id;
  std::map<Activity, ProfileEntry> entries;
};

enum class Alignment {
  /// Search the window's phase against one period of forecast past the training data.
  phase,
  /// Use the window's own time stamps.
  absolute,
};

struct AuthConfig {
  forecast::FitConfig fit;
  forecast::PredictConfig predict;
  NoveltyConfig novelty;
  double te_threshold = 0.70;
  double escalation_floor = 0.40;
  Alignment alignment = Alignment::phase;
  int min_cycles = 5;
  int max_order = 10;
  double period_min = 10.0;
  std::size_t window_length = 100;
  std::size_t window_stride = 25;
  std::size_t buffer_cap = 5000;
};

enum class Verdict { accept, escalate, reject };
std::string_view to_string(Verdict v);

struct AuthDecision {
  Verdict verdict = Verdict::reject;
  /// Minimum of axis_coverage.
  double coverage_ratio = 0.0;
  double te_threshold = 0.0;
  double escalation_floor = 0.0;
  std::array<double, 3> axis_coverage{};
  double novelty_score = 0.0;
  double novelty_threshold = 0.0;
  bool novelty_pass = false;
  /// Entry whose models judged the window.
  Activity matched = Activity::unknown;
  /// Forecast times the window was aligned to.
  std::vector<double> aligned_t;
};

/// Builds an entry from accumulated samples of one activity. Throws ColdStart
/// unless the data holds at least config.min_cycles whole cycles.
ProfileEntry make_entry(Activity label, const std::vector<double> &t, const std::array<std::vector<double>, 3> &axes,
                        const AuthConfig &config = {});
ProfileEntry make_entry(const io::Recording &rec, const AuthConfig &config = {});

/// Number of whole cycles credited to n samples of the given period.
std::size_t count_cycles(std::size_t n, double period);

/// Returns a copy with the entry for rec.label (re)built from rec.
ActivityProfile with_recording(const ActivityProfile &profile, const io::Recording &rec, const AuthConfig &config = {});

/// Pure. Throws ColdStart when no entry can judge the window and TooShort when
/// the window is shorter than one period.
AuthDecision authenticate(const ActivityWindow &w, const ActivityProfile &profile, const AuthConfig &config = {});

/// Appends an accepted window at its aligned times, refits, and returns the new
/// profile. Throws ContractViolation unless decision.verdict is accept.
ActivityProfile accept_and_update(const ActivityWindow &w, const AuthDecision &decision,
                                  const ActivityProfile &profile, const AuthConfig &config = {});

inline constexpr int kProfileSchemaVersion = 1;

nlohmann::json profile_to_json(const ActivityProfile &profile, const nlohmann::json &meta = nullptr);
ActivityProfile profile_from_json(const nlohmann::json &doc, nlohmann::json *meta = nullptr);

nlohmann::json auth_config_to_json(const AuthConfig &config);
AuthConfig auth_config_from_json(const nlohmann::json &doc, AuthConfig base = {});

nlohmann::json decision_to_json(const AuthDecision &d);

} // namespace cycleauth::auth
