#include "repseg/report.hpp"

#include <cstdio>
#include <exception>

#include "repseg/errors.hpp"

namespace repseg {

using nlohmann::json;

EvalReport evaluate_item(const DatasetItem& item, const PipelineConfig& config) {
  EvalReport report;
  report.image = item.stem;
  try {
    for (const auto& [name, level] : config.levels) {
      const auto gt = item.truth.levels.find(name);
      if (gt == item.truth.levels.end()) continue;
      const PipelineResult res = run_pipeline(item.image, config, level, 1);
      LevelScore ls;
      ls.level = name;
      ls.params = level;
      ls.pr = score(res.mask, gt->second, PredictionUnit::ConnectedRegion, config.iou_threshold);
      ls.runtime_ms = res.timings.total_ms;
      report.levels.push_back(std::move(ls));
    }
  } catch (const std::exception& e) {
    report.levels.clear();
    report.error = e.what();
  }
  return report;
}

std::map<std::string, PrecisionRecall> aggregate(const std::vector<EvalReport>& reports) {
  std::map<std::string, std::pair<PrecisionRecall, int>> sums;
  for (const auto& r : reports) {
    if (!r.error.empty()) continue;
    for (const auto& l : r.levels) {
      auto& [pr, n] = sums[l.level];
      pr.precision += l.pr.precision;
      pr.recall += l.pr.recall;
      ++n;
    }
  }
  std::map<std::string, PrecisionRecall> out;
  for (const auto& [level, acc] : sums) {
    out[level] = {acc.first.precision / acc.second, acc.first.recall / acc.second};
  }
  return out;
}

json to_json(const EvalReport& report, bool with_runtime) {
  json j{{"image", report.image}};
  if (!report.error.empty()) {
    j["error"] = report.error;
    return j;
  }
  json levels = json::object();
  for (const auto& l : report.levels) {
    json entry{{"precision", l.pr.precision},
               {"recall", l.pr.recall},
               {"f1", l.pr.f1()},
               {"params", to_json(l.params)}};
    if (with_runtime) entry["runtime_ms"] = l.runtime_ms;
    levels[l.level] = std::move(entry);
  }
  j["levels"] = std::move(levels);
  return j;
}

json eval_summary_json(const std::vector<EvalReport>& reports, bool with_runtime) {
  json images = json::array();
  std::size_t failed = 0;
  for (const auto& r : reports) {
    images.push_back(to_json(r, with_runtime));
    if (!r.error.empty()) ++failed;
  }
  json agg = json::object();
  for (const auto& [level, pr] : aggregate(reports)) {
    agg[level] = {{"precision", pr.precision}, {"recall", pr.recall}, {"f1", pr.f1()}};
  }
  return json{{"metric", kMetricName},
              {"images", std::move(images)},
              {"image_count", reports.size()},
              {"failed", failed},
              {"aggregate", std::move(agg)}};
}

json run_report_json(const PipelineResult& result, const PipelineConfig& config,
                     const LevelSpec& level) {
  return json{{"level", level.name},
              {"level_params", to_json(level)},
              {"config", to_json(config)},
              {"counts",
               {{"edge_pixels", result.edge_pixels},
                {"keypoints", result.keypoints.size()},
                {"splashes", result.splashes.size()},
                {"hotspots", result.hotspots.size()},
                {"superpixels", result.superpixels.count},
                {"graph_nodes", result.graph.nodes.size()},
                {"graph_edges", result.graph.edges.size()},
                {"components", result.components}}},
              {"mask", {{"width", result.mask.width()},
                        {"height", result.mask.height()},
                        {"labels", result.mask.label_count()}}}};
}

json timings_json(const StageTimings& t) {
  return json{{"features_ms", t.features_ms},       {"splash_ms", t.splash_ms},
              {"accumulator_ms", t.accumulator_ms}, {"superpixel_ms", t.superpixel_ms},
              {"propagate_ms", t.propagate_ms},     {"total_ms", t.total_ms}};
}

std::string accumulator_csv(const AccumulatorSpace& acc) {
  std::string out = "row,col,value\n";
  char line[96];
  for (int r = 0; r < acc.side(); ++r) {
    for (int c = 0; c < acc.side(); ++c) {
      const double v = acc.at(r, c);
      if (v == 0.0) continue;
      std::snprintf(line, sizeof line, "%d,%d,%.9g\n", r, c, v);
      out += line;
    }
  }
  return out;
}

std::string graph_csv(const SuperpixelGraph& graph) {
  std::string out = "a,b,multiplicity\n";
  for (const auto& [edge, count] : graph.edges) {
    out += std::to_string(edge.first) + "," + std::to_string(edge.second) + "," +
           std::to_string(count) + "\n";
  }
  return out;
}

}  // namespace repseg
