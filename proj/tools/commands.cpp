#include "commands.hpp"

#include <cstdio>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>

#include "repseg/parallel.hpp"
#include "repseg/repseg.hpp"

namespace repseg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

PipelineConfig config_from(const fs::path& path) {
  if (path.empty()) return PipelineConfig::defaults();
  return load_config(path);
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": cannot create directory: " + ec.message());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run_segment(const SegmentArgs& args, int jobs) {
  PipelineConfig config = config_from(args.config);
  const std::string source = args.config.empty() ? "<defaults>" : args.config.string();
  LevelSpec level = config.level(args.level, source);
  if (args.superpixels) level.superpixels = *args.superpixels;
  if (args.compactness) level.compactness = *args.compactness;
  config.levels[level.name] = level;
  config.validate(source);

  const Image img = load_image(args.image);
  const PipelineResult res = run_pipeline(img, config, level, jobs);

  make_dir(args.out);
  write_mask_png(res.mask, args.out / "mask.png");
  json report = run_report_json(res, config, level);
  report["image"] = args.image.filename().string();
  write_text_atomic(args.out / "report.json", dump(report));
  write_text_atomic(args.out / "timings.json", dump(timings_json(res.timings)));
  if (args.dump_superpixels) {
    write_image_png(superpixel_overlay(img, res.superpixels), args.out / "superpixels.png");
  }
  if (args.dump_accumulator) {
    write_text_atomic(args.out / "accumulator.csv", accumulator_csv(res.accumulator));
  }
  if (args.dump_graph) write_text_atomic(args.out / "graph.csv", graph_csv(res.graph));

  std::printf("%s: %zu keypoints, %zu hotspots, %zu labels\n", args.image.string().c_str(),
              res.keypoints.size(), res.hotspots.size(), res.components);
  return 0;
}

int run_eval(const EvalArgs& args, int jobs) {
  const PipelineConfig config = config_from(args.config);
  const auto items = load_dataset(args.dataset);

  std::vector<EvalReport> reports(items.size());
  parallel_for(items.size(), jobs,
               [&](std::size_t i) { reports[i] = evaluate_item(items[i], config); });

  make_dir(args.out);
  write_text_atomic(args.out / "report.json", dump(eval_summary_json(reports, false)));
  json timings = json::object();
  for (const auto& r : reports) {
    json levels = json::object();
    for (const auto& l : r.levels) levels[l.level] = l.runtime_ms;
    timings[r.image] = std::move(levels);
  }
  write_text_atomic(args.out / "timings.json", dump(timings));

  std::size_t failed = 0;
  for (const auto& r : reports) {
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "error: " << r.image << ": " << r.error << "\n";
    }
  }
  for (const auto& [level, pr] : aggregate(reports)) {
    std::printf("%s: precision %.4f recall %.4f f1 %.4f\n", level.c_str(), pr.precision,
                pr.recall, pr.f1());
  }
  std::printf("%zu images, %zu failed\n", reports.size(), failed);
  return (!reports.empty() && failed == reports.size()) ? 1 : 0;
}

int run_sweep(const SweepArgs& args, int jobs) {
  const PipelineConfig config = config_from(args.config);
  const std::string source = args.config.empty() ? "<defaults>" : args.config.string();
  const LevelSpec& base = config.level(args.level, source);
  if (args.rs.empty() || args.superpixels.empty()) {
    throw InvalidParam("sweep: --r and --superpixels need at least one value each");
  }
  const Image img = load_image(args.image);
  const LabelMask gt = load_mask_png(args.gt);
  const auto cells = sweep(img, gt, args.rs, args.superpixels, config, base, jobs);
  if (args.out.has_parent_path()) make_dir(args.out.parent_path());
  write_text_atomic(args.out, sweep_csv(cells));
  std::printf("%zu cells written to %s\n", cells.size(), args.out.string().c_str());
  return 0;
}

int run_corrupt(const CorruptArgs& args, int jobs) {
  std::vector<CorruptionKind> kinds;
  if (args.kinds.empty()) {
    kinds.assign(kAllCorruptions.begin(), kAllCorruptions.end());
  } else {
    for (const auto& k : args.kinds) kinds.push_back(parse_corruption(k));
  }
  const auto items = load_dataset(args.dataset);

  std::set<std::string> level_names;
  for (const auto& item : items) {
    for (const auto& [name, mask] : item.truth.levels) level_names.insert(name);
  }
  for (auto kind : kinds) {
    const fs::path root = args.out / std::string(to_string(kind));
    make_dir(root / "images");
    write_annotations(root, {level_names.begin(), level_names.end()});
  }

  parallel_for(kinds.size() * items.size(), jobs, [&](std::size_t t) {
    const CorruptionKind kind = kinds[t / items.size()];
    const DatasetItem& item = items[t % items.size()];
    GroundTruth truth;
    for (const auto& [name, mask] : item.truth.levels) {
      truth.levels.emplace(name, corrupt_mask(mask, kind, args.seed));
    }
    write_dataset_item(args.out / std::string(to_string(kind)), item.stem,
                       corrupt(item.image, kind, args.seed), truth);
  });
  std::printf("%zu images x %zu corruptions written to %s\n", items.size(), kinds.size(),
              args.out.string().c_str());
  return 0;
}

int run_synth(const SynthArgs& args, int jobs) {
  if (args.count < 1) throw InvalidParam("synth: --count must be >= 1");
  std::vector<SynthSpec> specs(static_cast<std::size_t>(args.count));
  for (int i = 0; i < args.count; ++i) {
    SynthSpec& s = specs[static_cast<std::size_t>(i)];
    s.icon = args.icon >= 0 ? args.icon : i % kBuiltinIcons;
    s.rows = args.rows;
    s.cols = args.cols;
    s.period = args.period;
    s.jitter = args.jitter;
    s.canvas = args.canvas;
    s.icon_size = args.icon_size;
    s.seed = args.seed + static_cast<std::uint64_t>(i);
    s.validate();
  }
  make_dir(args.out / "images");
  write_annotations(args.out, {"instance", "pattern"});
  parallel_for(specs.size(), jobs, [&](std::size_t i) {
    auto [img, truth] = synth(specs[i]);
    char stem[32];
    std::snprintf(stem, sizeof stem, "synth_%03zu", i);
    write_dataset_item(args.out, stem, img, truth);
  });
  std::printf("%d images written to %s\n", args.count, args.out.string().c_str());
  return 0;
}

}  // namespace repseg::cli
