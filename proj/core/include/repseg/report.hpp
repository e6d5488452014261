#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "repseg/config.hpp"
#include "repseg/dataset.hpp"
#include "repseg/metric.hpp"
#include "repseg/pipeline.hpp"

namespace repseg {

struct LevelScore {
  std::string level;
  PrecisionRecall pr;
  LevelSpec params;
  double runtime_ms = 0.0;
};

struct EvalReport {
  std::string image;
  std::vector<LevelScore> levels;
  std::string error;  // nonempty when the image failed
};

/// Runs every config level that has a ground-truth mask for `item` and scores
/// it. Pipeline errors are caught and stored in `error`.
EvalReport evaluate_item(const DatasetItem& item, const PipelineConfig& config);

/// Mean precision/recall/f1 per level over successful images.
std::map<std::string, PrecisionRecall> aggregate(const std::vector<EvalReport>& reports);

/// Wall-clock fields are written only when `with_runtime` is set, so the
/// default serialization is byte-stable across runs.
nlohmann::json to_json(const EvalReport& report, bool with_runtime = false);
nlohmann::json eval_summary_json(const std::vector<EvalReport>& reports, bool with_runtime = false);

/// Parameters and counts of one segment run (no timings).
nlohmann::json run_report_json(const PipelineResult& result, const PipelineConfig& config,
                               const LevelSpec& level);
nlohmann::json timings_json(const StageTimings& timings);

/// CSV `row,col,value` of the nonzero accumulator cells.
std::string accumulator_csv(const AccumulatorSpace& acc);
/// CSV `a,b,multiplicity` of graph edges.
std::string graph_csv(const SuperpixelGraph& graph);

}  // namespace repseg
