#include "cycleauth/forecast/serialize.hpp"

#include "cycleauth/errors.hpp"

#include <cmath>

namespace cycleauth::forecast {

using nlohmann::json;

namespace {

json vec_json(const Eigen::VectorXd &v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd json_vec(const json &a) {
  if (!a.is_array()) throw ParseError("expected a numeric array");
  Eigen::VectorXd v(Eigen::Index(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ParseError("expected a numeric array");
    v[Eigen::Index(i)] = a[i].get<double>();
  }
  return v;
}

std::string kind_name(TrendKind k) { return k == TrendKind::linear ? "linear" : "logistic"; }

TrendKind parse_kind(const std::string &s) {
  if (s == "linear") return TrendKind::linear;
  if (s == "logistic") return TrendKind::logistic;
  throw ParseError("unknown trend kind '" + s + "'");
}

} // namespace

json model_to_json(const ForecastModel &m, const json &meta) {
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["trend"] = {{"kind", kind_name(m.trend.kind)},
                  {"capacity", m.trend.capacity},
                  {"rate", m.trend.rate},
                  {"offset", m.trend.offset},
                  {"changepoints", vec_json(m.trend.changepoints)},
                  {"delta", vec_json(m.trend.delta)},
                  {"gamma", vec_json(m.trend.gamma)}};
  json seas = json::array();
  for (const auto &s : m.seasonalities)
    seas.push_back({{"period", s.period}, {"order", s.order}, {"prior_scale", s.prior_scale}, {"coeffs", vec_json(s.coeffs)}});
  doc["seasonalities"] = seas;
  json ev = json::array();
  for (const auto &w : m.events.windows) ev.push_back({{"start", w.start}, {"end", w.end}, {"effect", w.effect}});
  doc["events"] = ev;
  doc["noise_sigma"] = m.noise_sigma;
  doc["delta_scale"] = m.delta_scale;
  doc["train_span"] = {m.t_min, m.t_max};
  doc["sample_step"] = m.sample_step;
  if (!meta.is_null()) doc["meta"] = meta;
  return doc;
}

ForecastModel model_from_json(const json &doc, json *meta) {
  try {
    if (doc.at("schema_version").get<int>() != kModelSchemaVersion) throw ParseError("unsupported model schema version");
    ForecastModel m;
    const json &tr = doc.at("trend");
    TrendKind kind = parse_kind(tr.at("kind").get<std::string>());
    Eigen::VectorXd gamma = json_vec(tr.at("gamma"));
    m.trend = make_trend<double>(kind, tr.at("capacity").get<double>(), tr.at("rate").get<double>(),
                                 tr.at("offset").get<double>(), json_vec(tr.at("changepoints")), json_vec(tr.at("delta")));
    if (gamma.size() != m.trend.gamma.size()) throw ParseError("gamma length does not match changepoints");
    for (Eigen::Index j = 0; j < gamma.size(); ++j)
      if (std::abs(gamma[j] - m.trend.gamma[j]) > 1e-9 * (1.0 + std::abs(gamma[j])))
        throw ParseError("gamma is not the continuity correction of the trend");
    m.trend.gamma = gamma;

    for (const auto &s : doc.at("seasonalities")) {
      SeasonalityParams sp;
      sp.period = s.at("period").get<double>();
      sp.order = s.at("order").get<int>();
      sp.prior_scale = s.at("prior_scale").get<double>();
      sp.coeffs = json_vec(s.at("coeffs"));
      sp.validate();
      m.seasonalities.push_back(std::move(sp));
    }
    for (const auto &w : doc.at("events"))
      m.events.windows.push_back({w.at("start").get<double>(), w.at("end").get<double>(), w.at("effect").get<double>()});
    m.events.validate();
    m.noise_sigma = doc.at("noise_sigma").get<double>();
    m.delta_scale = doc.at("delta_scale").get<double>();
    const json &span = doc.at("train_span");
    m.t_min = span.at(0).get<double>();
    m.t_max = span.at(1).get<double>();
    m.sample_step = doc.at("sample_step").get<double>();
    if (!(m.noise_sigma >= 0.0) || !(m.delta_scale >= 0.0)) throw ParseError("negative noise or delta scale");
    if (meta) *meta = doc.contains("meta") ? doc["meta"] : json();
    return m;
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    throw ParseError(std::string("invalid model document: ") + e.what());
  }
}

std::string dump_model(const ForecastModel &model, const json &meta) { return model_to_json(model, meta).dump(2) + "\n"; }

ForecastModel parse_model(const std::string &text, json *meta) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw ParseError(std::string("model is not valid JSON: ") + e.what());
  }
  return model_from_json(doc, meta);
}

json config_to_json(const FitConfig &c) {
  json seas = json::array();
  for (const auto &s : c.seasonalities)
    seas.push_back({{"period", s.period}, {"order", s.order}, {"prior_scale", s.prior_scale}});
  json ev = json::array();
  for (const auto &w : c.events.windows) ev.push_back({{"start", w.start}, {"end", w.end}});
  json doc = {{"trend", kind_name(c.trend)},
              {"n_changepoints", c.n_changepoints},
              {"changepoint_range", c.changepoint_range},
              {"changepoint_prior_scale", c.changepoint_prior_scale},
              {"seasonalities", seas},
              {"events", ev},
              {"event_prior_scale", c.event_prior_scale},
              {"detect_singularities", c.detect_singularities},
              {"singularity_threshold", c.singularity_threshold},
              {"max_iterations", c.max_iterations},
              {"tolerance", c.tolerance}};
  doc["capacity"] = c.capacity ? json(*c.capacity) : json();
  doc["changepoints"] = c.changepoints ? json(*c.changepoints) : json();
  return doc;
}

FitConfig config_from_json(const json &doc, FitConfig c) {
  try {
    if (doc.contains("trend")) c.trend = parse_kind(doc["trend"].get<std::string>());
    if (doc.contains("capacity"))
      c.capacity = doc["capacity"].is_null() ? std::nullopt : std::optional<double>(doc["capacity"].get<double>());
    if (doc.contains("n_changepoints")) c.n_changepoints = doc["n_changepoints"].get<int>();
    if (doc.contains("changepoint_range")) c.changepoint_range = doc["changepoint_range"].get<double>();
    if (doc.contains("changepoints"))
      c.changepoints = doc["changepoints"].is_null() ? std::nullopt
                                                     : std::optional(doc["changepoints"].get<std::vector<double>>());
    if (doc.contains("changepoint_prior_scale")) c.changepoint_prior_scale = doc["changepoint_prior_scale"].get<double>();
    if (doc.contains("seasonalities")) {
      c.seasonalities.clear();
      for (const auto &s : doc["seasonalities"])
        c.seasonalities.push_back({s.at("period").get<double>(), s.at("order").get<int>(), s.value("prior_scale", 10.0)});
    }
    if (doc.contains("events")) {
      c.events.windows.clear();
      for (const auto &w : doc["events"]) c.events.windows.push_back({w.at("start").get<double>(), w.at("end").get<double>(), 0.0});
    }
    if (doc.contains("event_prior_scale")) c.event_prior_scale = doc["event_prior_scale"].get<double>();
    if (doc.contains("detect_singularities")) c.detect_singularities = doc["detect_singularities"].get<bool>();
    if (doc.contains("singularity_threshold")) c.singularity_threshold = doc["singularity_threshold"].get<double>();
    if (doc.contains("max_iterations")) c.max_iterations = doc["max_iterations"].get<int>();
    if (doc.contains("tolerance")) c.tolerance = doc["tolerance"].get<double>();
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed fit configuration: ") + e.what());
  }
  return c;
}

} // namespace cycleauth::forecast
