#pragma once

#include "cycleauth/auth/profile.hpp"
#include "cycleauth/energy/policy.hpp"
#include "cycleauth/eval/cv.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace cycleauth::cli {

/// Everything a command needs, resolved as flags over config file over defaults.
struct RunConfig {
  std::uint64_t seed = 42;
  forecast::FitConfig fit;
  forecast::PredictConfig predict;
  std::size_t horizon = 100;

  std::size_t cv_train = 500;
  std::size_t cv_block = 100;
  std::size_t cv_blocks = 5;
  eval::CvOptions cv;

  auth::AuthConfig auth;

  energy::PolicyConfig policy;
  std::string sensor = "BMA220";
  std::string sensor_table; ///< empty selects the built-in table
  energy::RiskLevel initial_risk = energy::RiskLevel::regular;
  bool retrain = false;

  /// Copies the shared fit/predict settings into the nested configs.
  void sync();
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> level;
  std::optional<double> te_threshold;
  std::optional<std::size_t> horizon;
};

RunConfig config_from_json(const nlohmann::json &doc, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig &c);

/// Loads `path` (if non-empty), then applies overrides. Throws ParseError.
RunConfig resolve_config(const std::string &path, const Overrides &o);

} // namespace cycleauth::cli
