#pragma once

#include <cstddef>
#include <cstdint>

#include "repseg/accumulator.hpp"
#include "repseg/config.hpp"
#include "repseg/features.hpp"
#include "repseg/image.hpp"
#include "repseg/propagate.hpp"
#include "repseg/splash.hpp"
#include "repseg/superpixel.hpp"

namespace repseg {

struct StageTimings {
  double features_ms = 0.0;
  double splash_ms = 0.0;
  double accumulator_ms = 0.0;
  double superpixel_ms = 0.0;
  double propagate_ms = 0.0;
  double total_ms = 0.0;
};

struct PipelineResult {
  LabelMask mask;
  std::size_t edge_pixels = 0;
  std::vector<Keypoint> keypoints;
  std::vector<Splash> splashes;
  std::vector<Hotspot> hotspots;
  AccumulatorSpace accumulator{1, 1, 1.0};
  SuperpixelMap superpixels;
  SuperpixelGraph graph;
  std::size_t components = 0;
  StageTimings timings;
};

SplashParams splash_params(const PipelineConfig& config, const LevelSpec& level);
AccumulatorParams accumulator_params(const PipelineConfig& config, const LevelSpec& level);
SlicParams slic_params(const PipelineConfig& config, const LevelSpec& level);

/// features -> splash -> accumulator -> superpixel -> propagate. `jobs`
/// only parallelizes per-keypoint work whose results are written by index,
/// so the output is identical for every job count.
PipelineResult run_pipeline(const Image& img, const PipelineConfig& config,
                            const LevelSpec& level, int jobs = 1);

}  // namespace repseg
