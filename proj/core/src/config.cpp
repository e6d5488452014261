#include "repseg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "repseg/errors.hpp"

namespace repseg {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& obj, std::string path, const std::string& source)
      : obj_(obj), path_(std::move(path)), source_(source) {
    if (!obj_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) return;
    const std::string field = child(key);
    if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) fail(field, "expected a string");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) fail(field, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (it->template get<long long>() < 0) fail(field, "must be >= 0");
      }
    } else {
      if (!it->is_number()) fail(field, "expected a number");
    }
    out = it->template get<T>();
  }

  const json* object(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) fail(child(key), "unknown field");
    }
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ConfigError(source_, field, what);
  }

 private:
  const json& obj_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> seen_;
};

LevelSpec parse_level(const json& obj, const std::string& name, const std::string& source) {
  LevelSpec level;
  level.name = name;
  Reader rd(obj, "levels." + name, source);
  rd.read("r", level.r);
  rd.read("k", level.k);
  rd.read("sigma", level.sigma);
  rd.read("tau", level.tau);
  rd.read("superpixels", level.superpixels);
  rd.read("compactness", level.compactness);
  rd.finish();
  return level;
}

}  // namespace

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig c;
  c.levels["instance"] = LevelSpec{"instance", 16.0, 24, 5.0, 0.5, 300, 55.0};
  c.levels["pattern"] = LevelSpec{"pattern", 48.0, 24, 5.0, 0.3, 30, 10.0};
  return c;
}

void PipelineConfig::validate(const std::string& source) const {
  auto fail = [&](const std::string& field, const std::string& what) {
    throw ConfigError(source, field, what);
  };
  if (!(canny.low >= 0.0)) fail("features.canny_low", "must be >= 0");
  if (!(canny.high >= 0.0)) fail("features.canny_high", "must be >= 0");
  if (canny.low > canny.high) fail("features.canny_low", "must not exceed features.canny_high");
  if (!(canny.gauss_sigma > 0.0)) fail("features.gauss_sigma", "must be > 0");
  if (stride < 1) fail("features.stride", "must be >= 1");
  if (max_keypoints < 1) fail("features.max_keypoints", "must be >= 1");
  if (patch < 8 || patch % 2 != 0) fail("features.patch", "must be even and >= 8");
  if (!(d_max > 0.0)) fail("splash.d_max", "must be > 0");
  if (bin < 1) fail("accumulator.bin", "must be >= 1");
  if (half_extent < 0) fail("accumulator.half_extent", "must be >= 0 (0 = image size)");
  if (slic_iterations < 0) fail("superpixel.iterations", "must be >= 0");
  if (min_support < 1) fail("propagate.min_support", "must be >= 1");
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) fail("eval.iou_threshold", "must be in (0, 1]");
  if (levels.empty()) fail("levels", "at least one level is required");
  for (const auto& [name, lv] : levels) {
    const std::string p = "levels." + name;
    if (name.empty()) fail("levels", "level names must be nonempty");
    if (lv.name != name) fail(p + ".name", "does not match its key");
    if (!(lv.r >= 0.0)) fail(p + ".r", "must be >= 0");
    if (lv.k < 1) fail(p + ".k", "must be >= 1");
    if (!(lv.sigma > 0.0)) fail(p + ".sigma", "must be > 0");
    if (!(lv.tau >= 0.0 && lv.tau <= 1.0)) fail(p + ".tau", "must be in [0, 1]");
    if (lv.superpixels < 1) fail(p + ".superpixels", "must be >= 1");
    if (!(lv.compactness > 0.0)) fail(p + ".compactness", "must be > 0");
  }
}

const LevelSpec& PipelineConfig::level(const std::string& name, const std::string& source) const {
  const auto it = levels.find(name);
  if (it != levels.end()) return it->second;
  std::string available;
  for (const auto& n : level_names()) available += (available.empty() ? "" : ", ") + n;
  throw ConfigError(source, "levels." + name, "unknown level (available: " + available + ")");
}

std::vector<std::string> PipelineConfig::level_names() const {
  std::vector<std::string> names;
  for (const auto& [name, lv] : levels) names.push_back(name);
  return names;
}

PipelineConfig parse_config(const json& doc, const std::string& source) {
  PipelineConfig c = PipelineConfig::defaults();
  Reader root(doc, "", source);
  if (const json* f = root.object("features")) {
    Reader rd(*f, "features", source);
    rd.read("canny_low", c.canny.low);
    rd.read("canny_high", c.canny.high);
    rd.read("gauss_sigma", c.canny.gauss_sigma);
    rd.read("stride", c.stride);
    rd.read("max_keypoints", c.max_keypoints);
    rd.read("patch", c.patch);
    rd.finish();
  }
  if (const json* s = root.object("splash")) {
    Reader rd(*s, "splash", source);
    rd.read("d_max", c.d_max);
    rd.finish();
  }
  if (const json* a = root.object("accumulator")) {
    Reader rd(*a, "accumulator", source);
    rd.read("bin", c.bin);
    rd.read("half_extent", c.half_extent);
    rd.finish();
  }
  if (const json* s = root.object("superpixel")) {
    Reader rd(*s, "superpixel", source);
    rd.read("iterations", c.slic_iterations);
    rd.finish();
  }
  if (const json* p = root.object("propagate")) {
    Reader rd(*p, "propagate", source);
    rd.read("min_support", c.min_support);
    rd.finish();
  }
  if (const json* e = root.object("eval")) {
    Reader rd(*e, "eval", source);
    rd.read("iou_threshold", c.iou_threshold);
    rd.finish();
  }
  if (const json* lv = root.object("levels")) {
    if (!lv->is_object()) throw ConfigError(source, "levels", "expected an object");
    c.levels.clear();
    for (const auto& [name, body] : lv->items()) {
      c.levels[name] = parse_level(body, name, source);
    }
  }
  root.finish();
  c.validate(source);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open config");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), "<document>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, path.string());
}

json to_json(const LevelSpec& lv) {
  return json{{"r", lv.r},         {"k", lv.k},
              {"sigma", lv.sigma}, {"tau", lv.tau},
              {"superpixels", lv.superpixels}, {"compactness", lv.compactness}};
}

json to_json(const PipelineConfig& c) {
  json levels = json::object();
  for (const auto& [name, lv] : c.levels) levels[name] = to_json(lv);
  return json{
      {"features",
       {{"canny_low", c.canny.low},
        {"canny_high", c.canny.high},
        {"gauss_sigma", c.canny.gauss_sigma},
        {"stride", c.stride},
        {"max_keypoints", c.max_keypoints},
        {"patch", c.patch}}},
      {"splash", {{"d_max", c.d_max}}},
      {"accumulator", {{"bin", c.bin}, {"half_extent", c.half_extent}}},
      {"superpixel", {{"iterations", c.slic_iterations}}},
      {"propagate", {{"min_support", c.min_support}}},
      {"eval", {{"iou_threshold", c.iou_threshold}}},
      {"levels", levels},
  };
}

}  // namespace repseg
