#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "repseg/features.hpp"

namespace repseg {

/// One operating point of the pipeline. Coarser values (larger r, fewer
/// superpixels, higher tau) select coarser semantic levels.
struct LevelSpec {
  std::string name;
  double r = 16.0;
  int k = 24;
  double sigma = 5.0;
  double tau = 0.5;
  int superpixels = 300;
  double compactness = 55.0;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

/// Every tunable of the pipeline and evaluation kit. Defaults live here and
/// are echoed into run reports.
struct PipelineConfig {
  // features
  CannyParams canny{};
  int stride = 4;
  std::size_t max_keypoints = 5000;
  int patch = 16;
  // splash
  double d_max = 0.45;
  // accumulator
  int bin = 2;
  int half_extent = 0;  // 0: min(width, height)
  // superpixel
  int slic_iterations = 10;
  // propagate
  int min_support = 1;
  // evalkit
  double iou_threshold = 0.5;

  std::map<std::string, LevelSpec> levels;

  /// Built-in config with the "instance" and "pattern" levels.
  static PipelineConfig defaults();

  /// Throws ConfigError naming `source` and the dotted field path.
  void validate(const std::string& source = "<config>") const;

  /// Throws ConfigError listing the available levels.
  const LevelSpec& level(const std::string& name, const std::string& source = "<config>") const;
  std::vector<std::string> level_names() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Missing fields take their defaults; unknown fields are errors. A
/// `levels` object, when present, replaces the default levels entirely.
PipelineConfig parse_config(const nlohmann::json& doc, const std::string& source = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& config);
nlohmann::json to_json(const LevelSpec& level);

}  // namespace repseg
