#pragma once

#include "cycleauth/io/recording.hpp"

#include <cstddef>
#include <vector>

namespace cycleauth::io {

struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const SampleRange &, const SampleRange &) = default;
};

/// Rolling-origin split: a training prefix followed by contiguous test blocks.
struct CvSplit {
  SampleRange train;
  std::vector<SampleRange> test_blocks;
};

CvSplit make_cv_splits(const Recording &rec, std::size_t train_len = 500, std::size_t block = 100,
                       std::size_t n_blocks = 5);
CvSplit make_cv_splits(std::size_t length, std::size_t train_len, std::size_t block, std::size_t n_blocks);

/// Per-axis z-score using statistics of `train` only.
struct AxisNormalizer {
  std::array<double, 3> mean{};
  std::array<double, 3> scale{1.0, 1.0, 1.0};

  static AxisNormalizer from_range(const Recording &rec, SampleRange train);
  Recording apply(const Recording &rec) const;
};

} // namespace cycleauth::io
