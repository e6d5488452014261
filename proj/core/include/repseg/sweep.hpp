#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "repseg/config.hpp"
#include "repseg/image.hpp"
#include "repseg/metric.hpp"

namespace repseg {

struct SweepCell {
  double r = 0.0;
  int superpixels = 0;
  PrecisionRecall pr;
};

/// Runs the full pipeline for every (r, superpixels) pair, r-major, with all
/// other fields from `base`. Cells are independent and run on up to `jobs`
/// threads.
std::vector<SweepCell> sweep(const Image& img, const LabelMask& gt, const std::vector<double>& rs,
                             const std::vector<int>& superpixels, const PipelineConfig& config,
                             const LevelSpec& base, int jobs = 1);

/// Header `r,superpixels,precision,recall`, one row per cell.
std::string sweep_csv(const std::vector<SweepCell>& cells);

}  // namespace repseg
