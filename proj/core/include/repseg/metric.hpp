#pragma once

#include "repseg/image.hpp"

namespace repseg {

inline constexpr const char* kMetricName = "repseg-pr@0.5";

/// What counts as one predicted instance during matching.
enum class PredictionUnit {
  // Each 4-connected region of each predicted label. Propagation gives all
  // occurrences of a category one label; its spatially separate regions are
  // the instances.
  ConnectedRegion,
  // Each predicted label as a whole.
  Label,
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1() const noexcept;
};

/// Greedy one-to-one IoU matching between predicted units and ground-truth
/// instances: repeatedly take the remaining pair with the highest IoU (ties by
/// lower prediction then lower instance index) while IoU >= iou_threshold.
/// precision = matched overlap / predicted pixels, recall = matched overlap /
/// ground-truth pixels. Empty prediction gives (0, 0) unless ground truth is
/// empty too, which gives (1, 1). Throws DimensionMismatch.
PrecisionRecall score(const LabelMask& pred, const LabelMask& gt,
                      PredictionUnit unit = PredictionUnit::ConnectedRegion,
                      double iou_threshold = 0.5);

/// Splits every nonzero label into its 4-connected regions, numbered in
/// row-major order of first pixel.
LabelMask split_connected_regions(const LabelMask& mask);

}  // namespace repseg
