#include "repseg/pipeline.hpp"

#include <algorithm>
#include <chrono>

namespace repseg {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

SplashParams splash_params(const PipelineConfig& config, const LevelSpec& level) {
  return SplashParams{level.k, level.r, config.d_max};
}

AccumulatorParams accumulator_params(const PipelineConfig& config, const LevelSpec& level) {
  return AccumulatorParams{level.sigma, config.bin, config.half_extent};
}

SlicParams slic_params(const PipelineConfig& config, const LevelSpec& level) {
  return SlicParams{level.superpixels, level.compactness, config.slic_iterations};
}

PipelineResult run_pipeline(const Image& img, const PipelineConfig& config,
                            const LevelSpec& level, int jobs) {
  const auto start = Clock::now();
  PipelineResult res;

  auto t = Clock::now();
  const Image gray = to_gray(img);
  const EdgeMap edges = canny(gray, config.canny);
  res.edge_pixels = edges.count();
  res.keypoints = sample_keypoints(edges, config.stride, config.max_keypoints);
  const auto descriptors = describe_all(gray, res.keypoints, config.patch, jobs);
  res.timings.features_ms = ms_since(t);

  t = Clock::now();
  res.splashes = make_splashes(res.keypoints, descriptors, splash_params(config, level), jobs);
  res.timings.splash_ms = ms_since(t);

  t = Clock::now();
  AccumulatorParams ap = accumulator_params(config, level);
  if (ap.half_extent == 0) ap.half_extent = std::min(img.width(), img.height());
  // Single-threaded on purpose: the vote sum order is part of the output contract.
  res.accumulator = vote(res.splashes, ap, 1);
  res.hotspots = select_hotspots(res.accumulator, res.splashes, level.tau);
  res.timings.accumulator_ms = ms_since(t);

  t = Clock::now();
  SlicParams sp = slic_params(config, level);
  sp.superpixels = std::min<int>(sp.superpixels, static_cast<int>(img.pixel_count()));
  res.superpixels = slic(img, sp);
  res.timings.superpixel_ms = ms_since(t);

  t = Clock::now();
  res.graph = build_graph(res.superpixels, res.hotspots, res.splashes, res.keypoints,
                          config.min_support);
  const auto components = connected_components(res.graph);
  res.mask = render_mask(res.superpixels, components);
  res.components = res.mask.label_count();
  res.timings.propagate_ms = ms_since(t);

  res.timings.total_ms = ms_since(start);
  return res;
}

}  // namespace repseg
