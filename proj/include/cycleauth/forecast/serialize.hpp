#pragma once

#include "cycleauth/forecast/model.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace cycleauth::forecast {

inline constexpr int kModelSchemaVersion = 1;

/// `meta` is carried verbatim under "meta" when not null.
nlohmann::json model_to_json(const ForecastModel &model, const nlohmann::json &meta = nullptr);
ForecastModel model_from_json(const nlohmann::json &doc, nlohmann::json *meta = nullptr);

std::string dump_model(const ForecastModel &model, const nlohmann::json &meta = nullptr);
ForecastModel parse_model(const std::string &text, nlohmann::json *meta = nullptr);

nlohmann::json config_to_json(const FitConfig &config);
/// Fields absent from `doc` keep their values from `base`.
FitConfig config_from_json(const nlohmann::json &doc, FitConfig base = {});

} // namespace cycleauth::forecast
