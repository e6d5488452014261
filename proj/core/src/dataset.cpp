#include "repseg/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "repseg/errors.hpp"

namespace fs = std::filesystem;

namespace repseg {

namespace {

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

// Level names from annotations.json, or empty when there is no index.
std::vector<std::string> indexed_levels(const fs::path& root) {
  const fs::path index = root / "annotations.json";
  std::error_code ec;
  if (!fs::exists(index, ec)) return {};
  std::ifstream in(index);
  if (!in) throw IoError(index.string() + ": cannot open");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(index.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("levels") || !doc["levels"].is_array()) {
    throw FormatError(index.string() + ": expected {\"levels\": [...]}");
  }
  std::vector<std::string> levels;
  for (const auto& l : doc["levels"]) {
    if (!l.is_string()) throw FormatError(index.string() + ": level names must be strings");
    levels.push_back(l.get<std::string>());
  }
  return levels;
}

}  // namespace

std::vector<DatasetItem> load_dataset(const fs::path& root) {
  const fs::path images = root / "images";
  std::error_code ec;
  if (!fs::is_directory(images, ec)) {
    throw IoError(images.string() + ": dataset images/ directory not found");
  }
  const auto levels = indexed_levels(root);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(images)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "warning: " << images.string() << " contains no images\n";
    return {};
  }

  std::vector<DatasetItem> items;
  items.reserve(files.size());
  for (const auto& file : files) {
    DatasetItem item;
    item.stem = file.stem().string();
    item.image_path = file;
    item.image = load_image(file);

    const fs::path mask_dir = root / "masks" / item.stem;
    std::vector<std::pair<std::string, fs::path>> found;
    if (!levels.empty()) {
      for (const auto& level : levels) {
        const fs::path p = mask_dir / (level + ".png");
        if (fs::exists(p, ec)) found.emplace_back(level, p);
      }
    } else if (fs::is_directory(mask_dir, ec)) {
      for (const auto& entry : fs::directory_iterator(mask_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
          found.emplace_back(entry.path().stem().string(), entry.path());
        }
      }
    }
    for (const auto& [level, path] : found) {
      LabelMask mask = load_mask_png(path);
      if (mask.width() != item.image.width() || mask.height() != item.image.height()) {
        throw FormatError(path.string() + ": mask is " + std::to_string(mask.width()) + "x" +
                          std::to_string(mask.height()) + " but image is " +
                          std::to_string(item.image.width()) + "x" +
                          std::to_string(item.image.height()));
      }
      item.truth.levels.emplace(level, std::move(mask));
    }
    items.push_back(std::move(item));
  }
  return items;
}

void write_dataset_item(const fs::path& root, const std::string& stem, const Image& image,
                        const GroundTruth& truth) {
  std::error_code ec;
  fs::create_directories(root / "images", ec);
  if (ec) throw IoError((root / "images").string() + ": cannot create directory");
  write_image_png(image, root / "images" / (stem + ".png"));
  if (truth.levels.empty()) return;
  const fs::path mask_dir = root / "masks" / stem;
  fs::create_directories(mask_dir, ec);
  if (ec) throw IoError(mask_dir.string() + ": cannot create directory");
  for (const auto& [level, mask] : truth.levels) write_mask_png(mask, mask_dir / (level + ".png"));
}

void write_annotations(const fs::path& root, const std::vector<std::string>& levels) {
  std::error_code ec;
  fs::create_directories(root, ec);
  nlohmann::json doc{{"levels", levels}};
  write_text_atomic(root / "annotations.json", doc.dump(2) + "\n");
}

}  // namespace repseg
