#pragma once

#include "cycleauth/auth/window.hpp"

#include <Eigen/Core>

#include <vector>

namespace cycleauth::auth {

/// One-class scorer: Mahalanobis distance of standardized features under a shrunk
/// covariance. Score is 1 / (1 + d^2 / dim), so 1 means "at the centroid".
struct NoveltyModel {
  Activity label = Activity::unknown;
  Eigen::VectorXd center;
  Eigen::VectorXd scale;
  Eigen::MatrixXd precision;
  double threshold = 0.0;

  double score(const Eigen::VectorXd &features) const;
  double score(const ActivityWindow &w) const { return score(extract_features(w)); }
  bool passes(double s) const { return s >= threshold; }
};

struct NoveltyConfig {
  /// Lower bound on each feature's scale relative to |mean|.
  double relative_floor = 0.25;
  double shrinkage = 0.5;
  double ridge = 1e-6;
  /// Quantile of held-out training scores used as the threshold.
  double quantile = 0.05;
  /// Windows whose RMS standardized deviation is within this bound always pass,
  /// whatever the training quantile says.
  double tolerance_rms_z = 2.0;
};

/// Requires at least 5 windows of a single label, else TrainingContract.
NoveltyModel train_novelty(const std::vector<ActivityWindow> &windows, const NoveltyConfig &config = {});
NoveltyModel train_novelty(Activity label, const std::vector<Eigen::VectorXd> &features,
                           const NoveltyConfig &config = {});

} // namespace cycleauth::auth
