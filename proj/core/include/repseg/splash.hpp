#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repseg/features.hpp"

namespace repseg {

struct SplashParams {
  int k = 8;             // neighbors per splash
  double r = 16.0;       // minimum image-plane distance to a neighbor (px)
  double d_max = 0.45;   // maximum descriptor L2 distance

  void validate() const;  // throws InvalidParam
};

struct Neighbor {
  KeypointId id = 0;
  float distance = 0.0f;  // descriptor L2 distance

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact nearest-neighbor index over the non-degenerate descriptors of a
/// keypoint list. Immutable after construction; queries are thread-safe.
class NeighborIndex {
 public:
  /// Throws EmptyInput when every descriptor is degenerate.
  explicit NeighborIndex(std::span<const Descriptor> descriptors);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t total() const noexcept { return row_of_.size(); }
  bool contains(KeypointId id) const noexcept;

  /// k nearest by descriptor L2 to `center`, excluding center itself,
  /// candidates closer than r in the image plane and candidates farther than
  /// d_max in descriptor space. Ties go to the lower keypoint id.
  std::vector<Neighbor> query(std::span<const Keypoint> keypoints, KeypointId center,
                              const SplashParams& params) const;

 private:
  std::vector<KeypointId> ids_;           // indexed keypoint ids, ascending
  std::vector<std::int32_t> row_of_;      // keypoint id -> row, -1 if degenerate
  std::vector<float> rows_;               // ids_.size() x kDescriptorSize
};

inline NeighborIndex build_index(std::span<const Descriptor> descriptors) {
  return NeighborIndex(descriptors);
}

inline std::vector<Neighbor> query_similar(const NeighborIndex& index,
                                           std::span<const Keypoint> keypoints,
                                           KeypointId center, const SplashParams& params) {
  return index.query(keypoints, center, params);
}

struct SplashVector {
  int dx = 0;
  int dy = 0;
  KeypointId neighbor = 0;
  float distance = 0.0f;

  friend bool operator==(const SplashVector&, const SplashVector&) = default;
};

/// A center keypoint with displacement vectors (neighbor - center) to its
/// descriptor-nearest neighbors.
struct Splash {
  KeypointId center = 0;
  std::vector<SplashVector> vectors;

  friend bool operator==(const Splash&, const Splash&) = default;
};

/// One splash per non-degenerate keypoint that has at least one surviving
/// neighbor, in keypoint-id order. Returns an empty list when every
/// descriptor is degenerate (nothing to match).
std::vector<Splash> make_splashes(std::span<const Keypoint> keypoints,
                                  std::span<const Descriptor> descriptors,
                                  const SplashParams& params, int jobs = 1);

}  // namespace repseg
