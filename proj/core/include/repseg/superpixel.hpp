#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repseg/image.hpp"

namespace repseg {

struct SlicParams {
  int superpixels = 1200;
  double compactness = 10.0;
  int iterations = 10;

  void validate(const Image& img) const;
};

/// Dense pixel -> superpixel assignment; ids are {0..count-1} and each id's
/// pixel set is 4-connected.
struct SuperpixelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> assignment;
  std::int32_t count = 0;

  std::int32_t at(int x, int y) const noexcept {
    return assignment[static_cast<std::size_t>(y) * width + x];
  }
};

/// SLIC in CIELAB-XY (L*-XY for single-channel input) with connectivity
/// enforcement. Deterministic and single-threaded.
SuperpixelMap slic(const Image& img, const SlicParams& params);

/// Boundary overlay: copies `img` to RGB and paints pixels whose right or
/// lower neighbor has a different superpixel id.
Image superpixel_overlay(const Image& img, const SuperpixelMap& spx);

}  // namespace repseg
