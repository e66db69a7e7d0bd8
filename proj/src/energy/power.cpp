#include "cycleauth/energy/power.hpp"

#include "cycleauth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace cycleauth::energy {

using nlohmann::json;

namespace {

std::string family(const std::string &mode) { return mode.substr(0, mode.find('@')); }

} // namespace

double SensorPowerProfile::current(const std::string &mode) const {
  auto it = mode_currents.find(mode);
  if (it == mode_currents.end()) throw ProfileMismatch("sensor " + name + " has no mode '" + mode + "'");
  return it->second;
}

void SensorPowerProfile::validate() const {
  const double inf = std::numeric_limits<double>::infinity();
  std::map<std::string, std::pair<double, double>> range; // family -> (min, max)
  for (const auto &[mode, ua] : mode_currents) {
    if (!(ua > 0.0) || !std::isfinite(ua)) throw DataError("sensor " + name + ": current of '" + mode + "' must be positive");
    const auto f = family(mode);
    if (f != "normal" && f != "low_power" && f != "suspend") throw DataError("sensor " + name + ": unknown mode '" + mode + "'");
    auto [it, fresh] = range.try_emplace(f, inf, -inf);
    it->second.first = std::min(it->second.first, ua);
    it->second.second = std::max(it->second.second, ua);
  }
  auto check = [&](const char *lo, const char *hi) {
    if (range.count(lo) && range.count(hi) && range[lo].second > range[hi].first)
      throw DataError("sensor " + name + ": " + lo + " current exceeds " + hi);
  };
  check("suspend", "low_power");
  check("low_power", "normal");
  check("suspend", "normal");
}

void DutyCycleSchedule::validate() const {
  if (!(frame_length > 0.0)) throw DataError("frame length must be positive");
  double sum = 0.0;
  for (const auto &s : segments) {
    if (!(s.duration >= 0.0)) throw DataError("segment durations must be non-negative");
    sum += s.duration;
  }
  if (std::abs(sum - frame_length) > 1e-9) throw DataError("segments do not add up to the frame length");
}

double DutyCycleSchedule::fraction(const std::string &mode) const {
  double d = 0.0;
  for (const auto &s : segments)
    if (s.mode == mode) d += s.duration;
  return d / frame_length;
}

DutyCycleSchedule duty_schedule(double frame_length, double duty, const std::string &active_mode,
                                const std::string &sleep_mode) {
  if (!(duty >= 0.0 && duty <= 1.0)) throw DataError("duty fraction must lie in [0, 1]");
  DutyCycleSchedule s;
  s.frame_length = frame_length;
  const double active = duty * frame_length;
  if (active > 0.0) s.segments.push_back({active_mode, active});
  if (active < frame_length) s.segments.push_back({sleep_mode, frame_length - active});
  s.validate();
  return s;
}

EnergyEstimate estimate_energy(const DutyCycleSchedule &schedule, const SensorPowerProfile &profile) {
  schedule.validate();
  EnergyEstimate e;
  for (const auto &s : schedule.segments) e.charge_uas += profile.current(s.mode) * s.duration;
  e.average_ua = e.charge_uas / schedule.frame_length;
  return e;
}

std::vector<SensorPowerProfile> profiles_from_json(const json &doc) {
  try {
    if (doc.at("schema_version").get<int>() != 1) throw ParseError("unsupported sensor table version");
    std::vector<SensorPowerProfile> out;
    for (const auto &s : doc.at("sensors")) {
      SensorPowerProfile p;
      p.name = s.at("name").get<std::string>();
      p.device = s.value("device", "");
      p.mode_currents = s.at("modes_ua").get<std::map<std::string, double>>();
      p.validate();
      out.push_back(std::move(p));
    }
    return out;
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed sensor table: ") + e.what());
  } catch (const DataError &e) {
    throw ParseError(e.what());
  }
}

json profiles_to_json(const std::vector<SensorPowerProfile> &profiles) {
  json sensors = json::array();
  for (const auto &p : profiles)
    sensors.push_back({{"name", p.name}, {"device", p.device}, {"modes_ua", p.mode_currents}});
  return {{"schema_version", 1}, {"sensors", sensors}};
}

std::vector<SensorPowerProfile> load_profiles(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return profiles_from_json(json::parse(in));
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const std::vector<SensorPowerProfile> &default_profiles() {
  static const std::vector<SensorPowerProfile> table = [] {
    const std::map<std::string, double> mpu = {{"normal", 500.0},
                                               {"low_power@1.25Hz", 10.0},
                                               {"low_power@5Hz", 20.0},
                                               {"low_power@20Hz", 60.0},
                                               {"low_power@40Hz", 110.0}};
    std::vector<SensorPowerProfile> t = {
        // Low power is quoted as "less than 10uA"; the bound is stored.
        {"BMA220", "Galaxy Nexus I9250", {{"normal", 250.0}, {"low_power", 10.0}, {"suspend", 1.0}}},
        {"MPU-6050", "Galaxy Nexus S5", mpu},
        {"MPU-6500", "Galaxy S6 Edge", mpu},
        {"BMA280", "iPhone 6 Plus", {{"normal", 130.0}, {"low_power", 6.5}}},
        {"BMA253", "iPhone 7 / 7 Plus", {{"normal", 14.5}, {"low_power", 6.5}}},
        {"ADXL362", "Xiaomi smart bracelet", {{"normal@100Hz", 1.8}, {"normal@400Hz", 3.0}, {"suspend", 0.01}}},
    };
    for (const auto &p : t) p.validate();
    return t;
  }();
  return table;
}

const SensorPowerProfile &find_profile(const std::vector<SensorPowerProfile> &profiles, const std::string &name) {
  auto it = std::find_if(profiles.begin(), profiles.end(), [&](const auto &p) { return p.name == name; });
  if (it == profiles.end()) throw ProfileMismatch("unknown sensor '" + name + "'");
  return *it;
}

} // namespace cycleauth::energy
