#include "run_config.hpp"

#include "cycleauth/errors.hpp"
#include "cycleauth/forecast/serialize.hpp"

#include <fstream>

namespace cycleauth::cli {

using nlohmann::json;

void RunConfig::sync() {
  predict.seed = seed;
  cv.predict = predict;
  auth.fit = fit;
  auth.predict = predict;
}

RunConfig config_from_json(const json &doc, RunConfig c) {
  if (!doc.is_object()) throw ParseError("configuration must be a JSON object");
  try {
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("fit")) c.fit = forecast::config_from_json(doc["fit"], c.fit);
    if (doc.contains("predict")) {
      const auto &p = doc["predict"];
      c.predict.level = p.value("level", c.predict.level);
      c.predict.n_sims = p.value("n_sims", c.predict.n_sims);
      c.horizon = p.value("horizon", c.horizon);
    }
    if (doc.contains("crossval")) {
      const auto &v = doc["crossval"];
      c.cv_train = v.value("train", c.cv_train);
      c.cv_block = v.value("block", c.cv_block);
      c.cv_blocks = v.value("blocks", c.cv_blocks);
      c.cv.normalize = v.value("normalize", c.cv.normalize);
      c.cv.auto_order = v.value("auto_order", c.cv.auto_order);
      c.cv.period_min = v.value("period_min", c.cv.period_min);
    }
    if (doc.contains("auth")) {
      json a = doc["auth"];
      a.erase("fit");
      a.erase("predict");
      c.auth = auth::auth_config_from_json(a, c.auth);
    }
    if (doc.contains("policy")) c.policy = energy::policy_config_from_json(doc["policy"], c.policy);
    c.sensor = doc.value("sensor", c.sensor);
    c.sensor_table = doc.value("sensor_table", c.sensor_table);
    if (doc.contains("initial_risk")) {
      auto r = energy::parse_risk(doc["initial_risk"].get<std::string>());
      if (!r) throw ParseError("unknown risk level '" + doc["initial_risk"].get<std::string>() + "'");
      c.initial_risk = *r;
    }
    c.retrain = doc.value("retrain", c.retrain);
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed configuration: ") + e.what());
  }
  c.sync();
  return c;
}

json config_to_json(const RunConfig &c) {
  json a = auth::auth_config_to_json(c.auth);
  a.erase("fit");
  a.erase("predict");
  return {{"seed", c.seed},
          {"fit", forecast::config_to_json(c.fit)},
          {"predict", {{"level", c.predict.level}, {"n_sims", c.predict.n_sims}, {"horizon", c.horizon}}},
          {"crossval",
           {{"train", c.cv_train},
            {"block", c.cv_block},
            {"blocks", c.cv_blocks},
            {"normalize", c.cv.normalize},
            {"auto_order", c.cv.auto_order},
            {"period_min", c.cv.period_min}}},
          {"auth", a},
          {"policy", energy::policy_config_to_json(c.policy)},
          {"sensor", c.sensor},
          {"sensor_table", c.sensor_table},
          {"initial_risk", energy::to_string(c.initial_risk)},
          {"retrain", c.retrain}};
}

RunConfig resolve_config(const std::string &path, const Overrides &o) {
  RunConfig c;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error &e) {
      throw ParseError("config '" + path + "' is not valid JSON: " + e.what());
    }
    c = config_from_json(doc, c);
  }
  if (o.seed) c.seed = *o.seed;
  if (o.level) {
    if (!(*o.level > 0.0 && *o.level < 1.0)) throw ParseError("--level must lie in (0, 1)");
    c.predict.level = *o.level;
  }
  if (o.te_threshold) {
    if (!(*o.te_threshold >= 0.0 && *o.te_threshold <= 1.0)) throw ParseError("--te-threshold must lie in [0, 1]");
    c.auth.te_threshold = *o.te_threshold;
  }
  if (o.horizon) c.horizon = *o.horizon;
  c.sync();
  return c;
}

} // namespace cycleauth::cli
