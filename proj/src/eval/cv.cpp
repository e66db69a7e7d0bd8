#include "cycleauth/eval/cv.hpp"

#include "cycleauth/errors.hpp"
#include "cycleauth/forecast/period.hpp"
#include "cycleauth/forecast/serialize.hpp"
#include "cycleauth/io/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace cycleauth::eval {

namespace {

/// Period of the axis with the strongest periodicity over rec[0, end).
double shared_period(const io::Recording &rec, std::size_t end, double p_min) {
  forecast::PeriodEstimate best;
  const double p_max = double(end) / 2.0;
  for (const auto &axis : rec.axes) {
    auto est = forecast::estimate_period(std::span<const double>(axis.data(), end), p_min, p_max);
    if (est.score > best.score) best = est;
  }
  if (!(best.period > 0.0)) throw InsufficientData("no usable period in the training data");
  return best.period;
}

} // namespace

CvResult run_cv(const io::Recording &rec, const io::CvSplit &split, const forecast::FitConfig &fit_config,
                const CvOptions &options) {
  rec.validate();
  if (split.train.begin != 0 || split.test_blocks.empty() || split.test_blocks.back().end > rec.size())
    throw DataError("split does not fit the recording");
  std::size_t cursor = split.train.end;
  for (const auto &b : split.test_blocks) {
    if (b.begin != cursor || b.size() == 0) throw DataError("test blocks must follow the train range contiguously");
    cursor = b.end;
  }

  CvResult result;
  io::Recording data = rec;
  if (options.normalize) {
    result.normalizer = io::AxisNormalizer::from_range(rec, split.train);
    data = result.normalizer.apply(rec);
  }

  std::array<std::vector<BlockMetrics>, 3> blocks;
  std::vector<std::size_t> counts;
  for (std::size_t j = 0; j < split.test_blocks.size(); ++j) {
    const auto blk = split.test_blocks[j];
    forecast::FitConfig cfg = fit_config;
    try {
      if (cfg.seasonalities.empty()) {
        const double p = shared_period(data, blk.begin, options.period_min);
        const int order = std::clamp(options.auto_order, 1, std::max(1, int((p - 1.0) / 2.0)));
        cfg.seasonalities.push_back({p, order});
        result.periods.push_back(p);
      }
      for (int a = 0; a < 3; ++a) {
        const auto model = forecast::fit(data.axis_series(a, 0, blk.begin), cfg);
        const auto truth = data.axis_series(a, blk.begin, blk.end);
        std::vector<double> times(truth.t.data(), truth.t.data() + truth.t.size());
        const auto band = forecast::predict_at(model, times, options.predict);
        const auto m = metrics(truth, band);
        blocks[std::size_t(a)].push_back({j + 1, blk.begin, blk.end, m.mse, m.rmse, m.mae, m.coverage});
      }
    } catch (const Error &e) {
      throw Error(std::string("block ") + std::to_string(j + 1) + ": " + e.what());
    }
    counts.push_back(blk.size());
  }
  for (std::size_t a = 0; a < 3; ++a) result.axes[a] = pool(blocks[a], counts);
  return result;
}

double worst_axis_mse(const CvResult &r) {
  double worst = 0.0;
  for (const auto &a : r.axes) worst = std::max(worst, a.mse);
  return worst;
}

void write_cv_csv(std::ostream &out, const CvResult &r) {
  out << "block,axis,mse,rmse,mae,coverage\n";
  const std::size_t n_blocks = r.axes[0].blocks.size();
  for (std::size_t j = 0; j < n_blocks; ++j)
    for (std::size_t a = 0; a < 3; ++a) {
      const auto &b = r.axes[a].blocks[j];
      out << b.block << ',' << io::kAxisNames[a] << ',' << io::format_number(b.mse) << ','
          << io::format_number(b.rmse) << ',' << io::format_number(b.mae) << ',' << io::format_number(b.coverage)
          << '\n';
    }
}

nlohmann::json cv_summary(const CvResult &r) {
  nlohmann::json axes = nlohmann::json::object();
  for (std::size_t a = 0; a < 3; ++a) {
    const auto &m = r.axes[a];
    axes[io::kAxisNames[a]] = {{"mse", m.mse}, {"rmse", m.rmse}, {"mae", m.mae}, {"coverage", m.coverage}};
  }
  return {{"axes", axes},
          {"worst_axis_mse", worst_axis_mse(r)},
          {"periods", r.periods},
          {"normalizer", {{"mean", r.normalizer.mean}, {"scale", r.normalizer.scale}}}};
}

} // namespace cycleauth::eval
