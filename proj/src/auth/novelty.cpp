#include "cycleauth/auth/novelty.hpp"

#include "cycleauth/errors.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace cycleauth::auth {

namespace {

/// Magnitude a feature's spread is floored against. Location features of the
/// window layout (mean, min, max) use the axis peak-to-peak range, since their
/// own magnitude depends on where zero happens to sit.
double floor_reference(const Eigen::VectorXd &center, Eigen::Index j) {
  if (center.size() == kFeatureCount) {
    const Eigen::Index axis = j / kFeaturesPerAxis, k = j % kFeaturesPerAxis;
    if (k == 0 || k == 2 || k == 3) return std::abs(center[axis * kFeaturesPerAxis + 5]);
  }
  return std::abs(center[j]);
}

struct Fitted {
  Eigen::VectorXd center, scale;
  Eigen::MatrixXd precision;
};

Fitted fit_gaussian(const Eigen::MatrixXd &F, const NoveltyConfig &cfg) {
  const auto dim = F.cols();
  Fitted g;
  g.center = F.colwise().mean().transpose();
  Eigen::MatrixXd centered = F.rowwise() - g.center.transpose();
  g.scale.resize(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double sd = std::sqrt(centered.col(j).squaredNorm() / double(F.rows()));
    g.scale[j] = std::max({sd, cfg.relative_floor * floor_reference(g.center, j), 1e-12});
  }
  Eigen::MatrixXd Z = centered * g.scale.cwiseInverse().asDiagonal();
  Eigen::MatrixXd cov = (Z.transpose() * Z) / double(F.rows());
  cov = (1.0 - cfg.shrinkage) * cov;
  cov.diagonal().array() += cfg.shrinkage + cfg.ridge;
  g.precision = cov.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));
  g.precision = 0.5 * (g.precision + g.precision.transpose()).eval();
  return g;
}

double score_with(const Fitted &g, const Eigen::VectorXd &x) {
  const Eigen::VectorXd z = (x - g.center).cwiseQuotient(g.scale);
  const double d2 = z.dot(g.precision * z);
  return 1.0 / (1.0 + std::max(d2, 0.0) / double(x.size()));
}

/// Type-7 sample quantile.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = q * double(v.size() - 1);
  const auto lo = std::size_t(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - double(lo)) * (v[hi] - v[lo]);
}

} // namespace

double NoveltyModel::score(const Eigen::VectorXd &features) const {
  if (features.size() != center.size()) throw LengthMismatch("feature vector length does not match the model");
  if (!features.allFinite()) return 0.0;
  return score_with({center, scale, precision}, features);
}

NoveltyModel train_novelty(Activity label, const std::vector<Eigen::VectorXd> &features, const NoveltyConfig &config) {
  const auto n = Eigen::Index(features.size());
  if (n < 5) throw TrainingContract("novelty training needs at least 5 windows");
  const auto dim = features.front().size();
  Eigen::MatrixXd F(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (features[std::size_t(i)].size() != dim) throw LengthMismatch("feature vectors differ in length");
    if (!features[std::size_t(i)].allFinite()) throw DataError("non-finite training feature");
    F.row(i) = features[std::size_t(i)].transpose();
  }

  const Fitted full = fit_gaussian(F, config);
  std::vector<double> held_out(static_cast<std::size_t>(n));
  Eigen::MatrixXd rest(n - 1, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    rest.topRows(i) = F.topRows(i);
    rest.bottomRows(n - 1 - i) = F.bottomRows(n - 1 - i);
    const double loo = score_with(fit_gaussian(rest, config), F.row(i).transpose());
    held_out[std::size_t(i)] = std::min(loo, score_with(full, F.row(i).transpose()));
  }

  NoveltyModel m;
  m.label = label;
  m.center = full.center;
  m.scale = full.scale;
  m.precision = full.precision;
  const double tolerance = 1.0 / (1.0 + config.tolerance_rms_z * config.tolerance_rms_z);
  m.threshold = std::min(quantile(held_out, config.quantile), tolerance);
  return m;
}

NoveltyModel train_novelty(const std::vector<ActivityWindow> &windows, const NoveltyConfig &config) {
  if (windows.size() < 5) throw TrainingContract("novelty training needs at least 5 windows");
  const Activity label = windows.front().label;
  std::vector<Eigen::VectorXd> features;
  for (const auto &w : windows) {
    if (w.label != label) throw TrainingContract("novelty training windows must share one label");
    features.push_back(extract_features(w));
  }
  return train_novelty(label, features, config);
}

} // namespace cycleauth::auth
