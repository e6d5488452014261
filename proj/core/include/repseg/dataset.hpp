#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "repseg/image.hpp"

namespace repseg {

/// Per-level instance masks for one image; each repeated-pattern instance
/// carries its own id.
struct GroundTruth {
  std::map<std::string, LabelMask> levels;
};

struct DatasetItem {
  std::string stem;
  std::filesystem::path image_path;
  Image image;
  GroundTruth truth;
};

/// Layout:
///   root/images/<stem>.{png,jpg,jpeg}
///   root/masks/<stem>/<level>.png
///   root/annotations.json  (optional: {"levels": [...]})
/// Items come back sorted by stem. Missing level masks are allowed. An empty
/// images/ directory yields an empty list and a warning on stderr.
/// Throws IoError when images/ is missing, FormatError naming the file when a
/// mask does not match its image.
std::vector<DatasetItem> load_dataset(const std::filesystem::path& root);

/// Writes `items` into the same layout (used by synth and corrupt).
void write_dataset_item(const std::filesystem::path& root, const std::string& stem,
                        const Image& image, const GroundTruth& truth);
void write_annotations(const std::filesystem::path& root, const std::vector<std::string>& levels);

}  // namespace repseg
