#pragma once

#include "cycleauth/eval/metrics.hpp"
#include "cycleauth/io/recording.hpp"
#include "cycleauth/io/splits.hpp"

#include <array>
#include <iosfwd>
#include <nlohmann/json.hpp>

namespace cycleauth::eval {

struct CvOptions {
  /// Z-score each axis with statistics of the initial training range.
  bool normalize = true;
  /// Used only when fit_config has no seasonalities: the period is estimated from
  /// each block's training data and a Fourier term of this order (capped below
  /// Nyquist for the period) is added.
  int auto_order = 10;
  double period_min = 10.0;
  forecast::PredictConfig predict;
};

struct CvResult {
  std::array<MetricReport, 3> axes;
  /// Period used for each block when estimated automatically, else empty.
  std::vector<double> periods;
  io::AxisNormalizer normalizer;
};

/// Rolling-origin evaluation: for block j fit on [0, test_blocks[j].begin) and
/// forecast the block. Each scored block joins the next training prefix.
CvResult run_cv(const io::Recording &rec, const io::CvSplit &split, const forecast::FitConfig &fit_config,
                const CvOptions &options = {});

/// Largest block-mean MSE across axes.
double worst_axis_mse(const CvResult &r);

/// Rows of `block,axis,mse,rmse,mae,coverage`; block is 1-based.
void write_cv_csv(std::ostream &out, const CvResult &r);
nlohmann::json cv_summary(const CvResult &r);

} // namespace cycleauth::eval
