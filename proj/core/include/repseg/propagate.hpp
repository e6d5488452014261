#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "repseg/accumulator.hpp"
#include "repseg/image.hpp"
#include "repseg/superpixel.hpp"

namespace repseg {

/// Superpixels touched by hotspot splashes, linked when a splash vector
/// joins two of them. Edge keys are (lower id, higher id).
struct SuperpixelGraph {
  std::vector<std::int32_t> nodes;  // ascending
  std::map<std::pair<std::int32_t, std::int32_t>, int> edges;  // -> multiplicity
};

SuperpixelGraph build_graph(const SuperpixelMap& spx, std::span<const Hotspot> hotspots,
                            std::span<const Splash> splashes,
                            std::span<const Keypoint> keypoints, int min_support = 1);

/// Node -> component id in 1..C, components numbered by their smallest
/// superpixel id.
using ComponentMap = std::map<std::int32_t, std::uint32_t>;

ComponentMap connected_components(const SuperpixelGraph& graph);

/// Pixels of superpixels in component c get label c, everything else 0.
LabelMask render_mask(const SuperpixelMap& spx, const ComponentMap& components);

}  // namespace repseg
