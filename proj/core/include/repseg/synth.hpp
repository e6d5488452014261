#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "repseg/dataset.hpp"
#include "repseg/image.hpp"

namespace repseg {

inline constexpr int kBuiltinIcons = 6;

struct SynthSpec {
  int icon = 0;         // 0..kBuiltinIcons-1
  int rows = 5;
  int cols = 5;
  int period = 64;      // px between neighboring placements
  int jitter = 2;       // max per-instance offset (px, each axis)
  int canvas = 512;     // square canvas side (px)
  int icon_size = 24;   // px
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidParam
};

/// Procedural tiling of one icon over a low-contrast textured background.
/// Ground truth has level "instance" (one id per placement, row-major) and
/// level "pattern" (the tiled region's bounding box as a single instance).
std::pair<Image, GroundTruth> synth(const SynthSpec& spec);

/// Binary shape of a built-in icon, icon_size x icon_size, row-major.
std::vector<std::uint8_t> icon_shape(int icon, int icon_size);

}  // namespace repseg
