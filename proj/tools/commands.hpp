#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace repseg::cli {

struct SegmentArgs {
  std::filesystem::path image;
  std::filesystem::path config;  // empty: built-in defaults
  std::string level = "instance";
  std::filesystem::path out;
  std::optional<int> superpixels;
  std::optional<double> compactness;
  bool dump_superpixels = false;
  bool dump_accumulator = false;
  bool dump_graph = false;
};

struct EvalArgs {
  std::filesystem::path dataset;
  std::filesystem::path config;
  std::filesystem::path out;
};

struct SweepArgs {
  std::filesystem::path image;
  std::filesystem::path gt;
  std::filesystem::path config;
  std::string level = "instance";
  std::vector<double> rs;
  std::vector<int> superpixels;
  std::filesystem::path out;  // CSV file
};

struct CorruptArgs {
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::vector<std::string> kinds;  // empty: all five
  std::uint64_t seed = 0;
};

struct SynthArgs {
  std::filesystem::path out;
  int count = 10;
  int icon = -1;  // -1: cycle through the built-in icons
  int rows = 5;
  int cols = 5;
  int period = 64;
  int jitter = 2;
  int canvas = 512;
  int icon_size = 24;
  std::uint64_t seed = 1;
};

// Each returns the process exit code. Library exceptions propagate.
int run_segment(const SegmentArgs& args, int jobs);
int run_eval(const EvalArgs& args, int jobs);
int run_sweep(const SweepArgs& args, int jobs);
int run_corrupt(const CorruptArgs& args, int jobs);
int run_synth(const SynthArgs& args, int jobs);

}  // namespace repseg::cli
