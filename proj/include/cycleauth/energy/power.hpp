#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cycleauth::energy {

/// Supply currents of one accelerometer, in microamps, keyed by mode name.
///
/// Mode names are "normal", "low_power" or "suspend", optionally qualified by a
/// sampling rate ("low_power@20Hz") when the datasheet lists several.
struct SensorPowerProfile {
  std::string name;
  std::string device;
  std::map<std::string, double> mode_currents;

  double current(const std::string &mode) const;
  /// Throws DataError on a non-positive current or on a mode family ordering
  /// violation (suspend <= low_power <= normal).
  void validate() const;
};

struct Segment {
  std::string mode;
  double duration = 0.0; ///< seconds
};

struct DutyCycleSchedule {
  double frame_length = 60.0; ///< seconds
  std::vector<Segment> segments;

  /// Durations non-negative and summing to frame_length within 1e-9.
  void validate() const;
  /// Share of the frame spent in `mode`.
  double fraction(const std::string &mode) const;
};

/// `duty` of the frame in active_mode, the rest in sleep_mode. Zero-length
/// segments are omitted.
DutyCycleSchedule duty_schedule(double frame_length, double duty, const std::string &active_mode = "normal",
                                const std::string &sleep_mode = "suspend");

struct EnergyEstimate {
  double average_ua = 0.0;
  double charge_uas = 0.0; ///< per frame
};

/// Throws ProfileMismatch when a segment's mode is missing from the profile.
EnergyEstimate estimate_energy(const DutyCycleSchedule &schedule, const SensorPowerProfile &profile);

std::vector<SensorPowerProfile> profiles_from_json(const nlohmann::json &doc);
nlohmann::json profiles_to_json(const std::vector<SensorPowerProfile> &profiles);
std::vector<SensorPowerProfile> load_profiles(const std::filesystem::path &path);

/// The six accelerometers of the reference handset table.
const std::vector<SensorPowerProfile> &default_profiles();
/// Looks up by sensor name; throws ProfileMismatch when absent.
const SensorPowerProfile &find_profile(const std::vector<SensorPowerProfile> &profiles, const std::string &name);

} // namespace cycleauth::energy
