#include <gtest/gtest.h>

#include <fstream>

#include "repseg/config.hpp"
#include "repseg/errors.hpp"
#include "tmpdir.hpp"

using namespace repseg;
using nlohmann::json;

namespace {

std::string field_of(const json& doc) {
  try {
    parse_config(doc, "cfg.json");
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.file(), "cfg.json");
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, DefaultsAreValidAndHaveTwoLevels) {
  const auto c = PipelineConfig::defaults();
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.level_names(), (std::vector<std::string>{"instance", "pattern"}));
  EXPECT_EQ(c.canny.low, 50.0);
  EXPECT_EQ(c.canny.high, 150.0);
  EXPECT_EQ(c.stride, 4);
  EXPECT_EQ(c.max_keypoints, 5000u);
  EXPECT_EQ(c.d_max, 0.45);
  EXPECT_EQ(c.bin, 2);
}

TEST(Config, EmptyDocumentIsDefaults) {
  EXPECT_EQ(parse_config(json::object()), PipelineConfig::defaults());
}

TEST(Config, RoundTrip) {
  json doc = {{"features", {{"stride", 6}, {"canny_low", 30.0}}},
              {"splash", {{"d_max", 0.5}}},
              {"levels", {{"fine", {{"r", 8.0}, {"tau", 0.7}, {"superpixels", 900}}}}}};
  const auto c = parse_config(doc);
  EXPECT_EQ(c.stride, 6);
  EXPECT_EQ(c.level("fine").superpixels, 900);
  EXPECT_EQ(c.level_names(), (std::vector<std::string>{"fine"}));
  EXPECT_EQ(parse_config(to_json(c)), c);
  EXPECT_EQ(parse_config(to_json(PipelineConfig::defaults())), PipelineConfig::defaults());
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of({{"levels", {{"fine", {{"tau", 1.5}}}}}}), "levels.fine.tau");
  EXPECT_EQ(field_of({{"features", {{"stride", 0}}}}), "features.stride");
  EXPECT_EQ(field_of({{"features", {{"strdie", 3}}}}), "features.strdie");
  EXPECT_EQ(field_of({{"features", {{"canny_low", 200}, {"canny_high", 100}}}}),
            "features.canny_low");
  EXPECT_EQ(field_of({{"splash", {{"d_max", "big"}}}}), "splash.d_max");
  EXPECT_EQ(field_of({{"levels", json::object()}}), "levels");
  EXPECT_EQ(field_of({{"bogus", 1}}), "bogus");
  EXPECT_EQ(field_of({{"features", {{"max_keypoints", -4}}}}), "features.max_keypoints");
  EXPECT_EQ(field_of({{"eval", {{"iou_threshold", 0.0}}}}), "eval.iou_threshold");
}

TEST(Config, UnknownLevelListsAvailable) {
  try {
    PipelineConfig::defaults().level("nope", "x.json");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("instance"), std::string::npos);
    EXPECT_NE(msg.find("pattern"), std::string::npos);
  }
}

TEST(Config, LoadFromFile) {
  const auto dir = fresh_dir("config_load");
  std::ofstream(dir / "ok.json") << R"({"accumulator": {"bin": 3}})";
  EXPECT_EQ(load_config(dir / "ok.json").bin, 3);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(load_config(dir / "bad.json"), ConfigError);
  EXPECT_THROW(load_config(dir / "missing.json"), IoError);
}
