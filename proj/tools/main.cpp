#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "repseg/errors.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;
constexpr int kMaxJobs = 256;

}  // namespace

int main(int argc, char** argv) {
  using namespace repseg::cli;

  CLI::App app{"repseg: unsupervised visual-repetition segmentation"};
  app.require_subcommand(1);
  app.fallthrough();  // --jobs also works after the subcommand
  app.set_version_flag("--version", "repseg 0.3.0");

  int jobs = 1;
  if (const char* env = std::getenv("REPSEG_JOBS"); env != nullptr && *env != '\0') {
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, jobs);
    if (ec != std::errc{} || ptr != end || jobs < 1 || jobs > kMaxJobs) {
      std::cerr << "error: REPSEG_JOBS: expected an integer in [1, " << kMaxJobs << "], got '"
                << env << "'\n";
      return kExitValidation;
    }
  }
  app.add_option("-j,--jobs", jobs,
                 "Worker threads, default $REPSEG_JOBS or 1 (results do not depend on this)")
      ->check(CLI::Range(1, kMaxJobs));

  std::function<int()> action;

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Segment one image");
  segment->add_option("image", seg.image, "Input PNG or JPEG")->required()->check(CLI::ExistingFile);
  segment->add_option("-c,--config", seg.config, "JSON config (default: built-in)")
      ->check(CLI::ExistingFile);
  segment->add_option("-l,--level", seg.level, "Level name from the config")
      ->capture_default_str();
  segment->add_option("-o,--out", seg.out, "Output directory")->required();
  segment->add_option("--superpixels", seg.superpixels, "Override the level's superpixel count");
  segment->add_option("--compactness", seg.compactness, "Override the level's SLIC compactness");
  segment->add_flag("--dump-superpixels", seg.dump_superpixels, "Write superpixels.png");
  segment->add_flag("--dump-accumulator", seg.dump_accumulator, "Write accumulator.csv");
  segment->add_flag("--dump-graph", seg.dump_graph, "Write graph.csv");
  segment->callback([&] { action = [&] { return run_segment(seg, jobs); }; });

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score every level on a dataset");
  eval->add_option("dataset", ev.dataset, "Dataset root")->required()->check(CLI::ExistingDirectory);
  eval->add_option("-c,--config", ev.config, "JSON config")->check(CLI::ExistingFile);
  eval->add_option("-o,--out", ev.out, "Output directory")->required();
  eval->callback([&] { action = [&] { return run_eval(ev, jobs); }; });

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Recall/precision heatmap over r x superpixels");
  sweep->add_option("image", sw.image, "Input image")->required()->check(CLI::ExistingFile);
  sweep->add_option("--gt", sw.gt, "Ground-truth label PNG")->required()->check(CLI::ExistingFile);
  sweep->add_option("-c,--config", sw.config, "JSON config")->check(CLI::ExistingFile);
  sweep->add_option("-l,--level", sw.level, "Level supplying the fixed fields")
      ->capture_default_str();
  sweep->add_option("--r", sw.rs, "Radius values")->required()->delimiter(',');
  sweep->add_option("--superpixels", sw.superpixels, "Superpixel counts")
      ->required()
      ->delimiter(',');
  sweep->add_option("-o,--out", sw.out, "Output CSV")->required();
  sweep->callback([&] { action = [&] { return run_sweep(sw, jobs); }; });

  CorruptArgs co;
  co.seed = 31337;
  auto* corrupt = app.add_subcommand("corrupt", "Write corrupted copies of a dataset");
  corrupt->add_option("dataset", co.dataset, "Dataset root")
      ->required()
      ->check(CLI::ExistingDirectory);
  corrupt->add_option("-o,--out", co.out, "Output root, one subtree per kind")->required();
  corrupt->add_option("--kinds", co.kinds, "Subset of kinds (default: all five)")->delimiter(',');
  corrupt->add_option("--seed", co.seed, "RNG seed")->capture_default_str();
  corrupt->callback([&] { action = [&] { return run_corrupt(co, jobs); }; });

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic tiling dataset");
  synth->add_option("-o,--out", sy.out, "Output dataset root")->required();
  synth->add_option("--count", sy.count, "Number of images")->capture_default_str();
  synth->add_option("--icon", sy.icon, "Icon id (default: cycle)");
  synth->add_option("--rows", sy.rows)->capture_default_str();
  synth->add_option("--cols", sy.cols)->capture_default_str();
  synth->add_option("--period", sy.period, "Tiling period in px")->capture_default_str();
  synth->add_option("--jitter", sy.jitter, "Max per-instance offset in px")->capture_default_str();
  synth->add_option("--canvas", sy.canvas, "Square canvas side in px")->capture_default_str();
  synth->add_option("--icon-size", sy.icon_size)->capture_default_str();
  synth->add_option("--seed", sy.seed, "Seed of the first image")->capture_default_str();
  synth->callback([&] { action = [&] { return run_synth(sy, jobs); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    return action();
  } catch (const repseg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const repseg::InvalidParam& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
