#include "cycleauth/io/splits.hpp"

#include "cycleauth/errors.hpp"

#include <cmath>
#include <string>

namespace cycleauth::io {

CvSplit make_cv_splits(std::size_t length, std::size_t train_len, std::size_t block, std::size_t n_blocks) {
  if (train_len == 0 || block == 0 || n_blocks == 0) throw DataError("split sizes must be positive");
  const std::size_t needed = train_len + block * n_blocks;
  if (length < needed)
    throw InsufficientData("recording has " + std::to_string(length) + " samples, split needs " + std::to_string(needed));
  CvSplit split;
  split.train = {0, train_len};
  for (std::size_t j = 0; j < n_blocks; ++j)
    split.test_blocks.push_back({train_len + j * block, train_len + (j + 1) * block});
  return split;
}

CvSplit make_cv_splits(const Recording &rec, std::size_t train_len, std::size_t block, std::size_t n_blocks) {
  rec.validate();
  return make_cv_splits(rec.size(), train_len, block, n_blocks);
}

AxisNormalizer AxisNormalizer::from_range(const Recording &rec, SampleRange train) {
  AxisNormalizer n;
  if (train.size() == 0 || train.end > rec.size()) throw DataError("normalization range is empty or out of bounds");
  for (int a = 0; a < 3; ++a) {
    const auto &v = rec.axes[std::size_t(a)];
    double mean = 0.0;
    for (std::size_t i = train.begin; i < train.end; ++i) mean += v[i];
    mean /= double(train.size());
    double var = 0.0;
    for (std::size_t i = train.begin; i < train.end; ++i) var += (v[i] - mean) * (v[i] - mean);
    double sd = std::sqrt(var / double(train.size()));
    n.mean[std::size_t(a)] = mean;
    n.scale[std::size_t(a)] = sd > 0.0 ? sd : 1.0;
  }
  return n;
}

Recording AxisNormalizer::apply(const Recording &rec) const {
  Recording out = rec;
  for (std::size_t a = 0; a < 3; ++a)
    for (auto &v : out.axes[a]) v = (v - mean[a]) / scale[a];
  return out;
}

} // namespace cycleauth::io
