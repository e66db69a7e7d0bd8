#include "cycleauth/auth/profile.hpp"

#include "cycleauth/errors.hpp"
#include "cycleauth/forecast/serialize.hpp"

namespace cycleauth::auth {

using nlohmann::json;

namespace {

json vec_json(const Eigen::VectorXd &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json &a) {
  auto v = a.get<std::vector<double>>();
  return Eigen::Map<Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

Activity activity_of(const json &j) {
  auto a = parse_activity(j.get<std::string>());
  if (!a) throw ParseError("unknown activity '" + j.get<std::string>() + "'");
  return *a;
}

json events_json(const forecast::EventTerm &e) {
  json a = json::array();
  for (const auto &w : e.windows) a.push_back({{"start", w.start}, {"end", w.end}, {"effect", w.effect}});
  return a;
}

forecast::EventTerm json_events(const json &a) {
  forecast::EventTerm e;
  for (const auto &w : a)
    e.windows.push_back({w.at("start").get<double>(), w.at("end").get<double>(), w.at("effect").get<double>()});
  return e;
}

Alignment parse_alignment(const std::string &s) {
  if (s == "phase") return Alignment::phase;
  if (s == "absolute") return Alignment::absolute;
  throw ParseError("unknown alignment '" + s + "'");
}

} // namespace

json profile_to_json(const ActivityProfile &p, const json &meta) {
  json entries = json::array();
  for (const auto &[label, e] : p.entries) {
    json models = json::array(), sing = json::array(), buf = json::array();
    for (std::size_t a = 0; a < 3; ++a) {
      models.push_back(forecast::model_to_json(e.axis_models[a]));
      sing.push_back(events_json(e.singularities[a]));
      buf.push_back(e.buffer[a]);
    }
    const auto &nm = e.novelty;
    json precision = json::array();
    for (Eigen::Index r = 0; r < nm.precision.rows(); ++r) precision.push_back(vec_json(nm.precision.row(r).transpose()));
    entries.push_back({{"activity", to_string(label)},
                       {"period", e.period},
                       {"order", e.order},
                       {"observation_count", e.observation_count},
                       {"axis_models", models},
                       {"singularities", sing},
                       {"novelty",
                        {{"center", vec_json(nm.center)},
                         {"scale", vec_json(nm.scale)},
                         {"precision", precision},
                         {"threshold", nm.threshold}}},
                       {"buffer", {{"t", e.buffer_t}, {"axes", buf}}}});
  }
  json doc = {{"schema_version", kProfileSchemaVersion}, {"user_id", p.user_id}, {"entries", entries}};
  if (!meta.is_null()) doc["meta"] = meta;
  return doc;
}

ActivityProfile profile_from_json(const json &doc, json *meta) {
  try {
    if (doc.at("schema_version").get<int>() != kProfileSchemaVersion)
      throw ParseError("unsupported profile schema version");
    ActivityProfile p;
    p.user_id = doc.at("user_id").get<std::string>();
    for (const auto &j : doc.at("entries")) {
      const Activity label = activity_of(j.at("activity"));
      ProfileEntry e;
      e.period = j.at("period").get<double>();
      e.order = j.at("order").get<int>();
      e.observation_count = j.at("observation_count").get<std::size_t>();
      const auto &models = j.at("axis_models");
      const auto &sing = j.at("singularities");
      const auto &buf = j.at("buffer");
      e.buffer_t = buf.at("t").get<std::vector<double>>();
      if (models.size() != 3 || sing.size() != 3 || buf.at("axes").size() != 3)
        throw ParseError("profile entries need exactly three axes");
      for (std::size_t a = 0; a < 3; ++a) {
        e.axis_models[a] = forecast::model_from_json(models[a]);
        e.singularities[a] = json_events(sing[a]);
        e.buffer[a] = buf.at("axes")[a].get<std::vector<double>>();
        if (e.buffer[a].size() != e.buffer_t.size()) throw ParseError("buffer axes differ in length");
      }
      const auto &nj = j.at("novelty");
      e.novelty.label = label;
      e.novelty.center = json_vec(nj.at("center"));
      e.novelty.scale = json_vec(nj.at("scale"));
      e.novelty.threshold = nj.at("threshold").get<double>();
      const auto dim = e.novelty.center.size();
      const auto &rows = nj.at("precision");
      if (e.novelty.scale.size() != dim || Eigen::Index(rows.size()) != dim)
        throw ParseError("novelty parameters have inconsistent sizes");
      e.novelty.precision.resize(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r) {
        auto row = json_vec(rows[std::size_t(r)]);
        if (row.size() != dim) throw ParseError("novelty precision is not square");
        e.novelty.precision.row(r) = row.transpose();
      }
      if (!p.entries.emplace(label, std::move(e)).second) throw ParseError("duplicate profile entry");
    }
    if (meta) *meta = doc.value("meta", json());
    return p;
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed profile: ") + e.what());
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    throw ParseError(std::string("invalid profile: ") + e.what());
  }
}

json auth_config_to_json(const AuthConfig &c) {
  return {{"fit", forecast::config_to_json(c.fit)},
          {"predict", {{"level", c.predict.level}, {"n_sims", c.predict.n_sims}, {"seed", c.predict.seed}}},
          {"novelty",
           {{"relative_floor", c.novelty.relative_floor},
            {"shrinkage", c.novelty.shrinkage},
            {"ridge", c.novelty.ridge},
            {"quantile", c.novelty.quantile},
            {"tolerance_rms_z", c.novelty.tolerance_rms_z}}},
          {"te_threshold", c.te_threshold},
          {"escalation_floor", c.escalation_floor},
          {"alignment", c.alignment == Alignment::phase ? "phase" : "absolute"},
          {"min_cycles", c.min_cycles},
          {"max_order", c.max_order},
          {"period_min", c.period_min},
          {"window_length", c.window_length},
          {"window_stride", c.window_stride},
          {"buffer_cap", c.buffer_cap}};
}

AuthConfig auth_config_from_json(const json &doc, AuthConfig c) {
  try {
    if (doc.contains("fit")) c.fit = forecast::config_from_json(doc["fit"], c.fit);
    if (doc.contains("predict")) {
      const auto &p = doc["predict"];
      c.predict.level = p.value("level", c.predict.level);
      c.predict.n_sims = p.value("n_sims", c.predict.n_sims);
      c.predict.seed = p.value("seed", c.predict.seed);
    }
    if (doc.contains("novelty")) {
      const auto &n = doc["novelty"];
      c.novelty.relative_floor = n.value("relative_floor", c.novelty.relative_floor);
      c.novelty.shrinkage = n.value("shrinkage", c.novelty.shrinkage);
      c.novelty.ridge = n.value("ridge", c.novelty.ridge);
      c.novelty.quantile = n.value("quantile", c.novelty.quantile);
      c.novelty.tolerance_rms_z = n.value("tolerance_rms_z", c.novelty.tolerance_rms_z);
    }
    c.te_threshold = doc.value("te_threshold", c.te_threshold);
    c.escalation_floor = doc.value("escalation_floor", c.escalation_floor);
    if (doc.contains("alignment")) c.alignment = parse_alignment(doc["alignment"].get<std::string>());
    c.min_cycles = doc.value("min_cycles", c.min_cycles);
    c.max_order = doc.value("max_order", c.max_order);
    c.period_min = doc.value("period_min", c.period_min);
    c.window_length = doc.value("window_length", c.window_length);
    c.window_stride = doc.value("window_stride", c.window_stride);
    c.buffer_cap = doc.value("buffer_cap", c.buffer_cap);
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed auth configuration: ") + e.what());
  }
  return c;
}

json decision_to_json(const AuthDecision &d) {
  return {{"verdict", to_string(d.verdict)},
          {"coverage_ratio", d.coverage_ratio},
          {"te_threshold", d.te_threshold},
          {"escalation_floor", d.escalation_floor},
          {"axis_coverage", d.axis_coverage},
          {"novelty_score", d.novelty_score},
          {"novelty_threshold", d.novelty_threshold},
          {"novelty_pass", d.novelty_pass},
          {"matched", to_string(d.matched)}};
}

} // namespace cycleauth::auth
