#include "repseg/sweep.hpp"

#include <cstdio>

#include "repseg/errors.hpp"
#include "repseg/parallel.hpp"
#include "repseg/pipeline.hpp"

namespace repseg {

std::vector<SweepCell> sweep(const Image& img, const LabelMask& gt, const std::vector<double>& rs,
                             const std::vector<int>& superpixels, const PipelineConfig& config,
                             const LevelSpec& base, int jobs) {
  if (rs.empty() || superpixels.empty()) throw InvalidParam("sweep: grid must be nonempty");
  if (gt.width() != img.width() || gt.height() != img.height()) {
    throw DimensionMismatch("sweep: ground truth does not match the image size");
  }
  std::vector<SweepCell> cells;
  for (double r : rs) {
    for (int sp : superpixels) cells.push_back({r, sp, {}});
  }
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    LevelSpec level = base;
    level.r = cells[i].r;
    level.superpixels = cells[i].superpixels;
    const auto result = run_pipeline(img, config, level, 1);
    cells[i].pr = score(result.mask, gt, PredictionUnit::ConnectedRegion, config.iou_threshold);
  });
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::string out = "r,superpixels,precision,recall\n";
  char line[128];
  for (const auto& c : cells) {
    std::snprintf(line, sizeof line, "%g,%d,%.6f,%.6f\n", c.r, c.superpixels, c.pr.precision,
                  c.pr.recall);
    out += line;
  }
  return out;
}

}  // namespace repseg
