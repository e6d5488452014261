#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "repseg/image.hpp"

namespace repseg {

/// Boolean edge map, one byte per pixel (0 or 1), row-major.
struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> edges;

  bool at(int x, int y) const noexcept {
    return edges[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t count() const noexcept;
};

struct CannyParams {
  // Thresholds on the raw Sobel gradient magnitude of the smoothed 0..255 image.
  double low = 50.0;
  double high = 150.0;
  double gauss_sigma = 1.4;
  friend bool operator==(const CannyParams&, const CannyParams&) = default;
};

/// Gaussian smoothing, Sobel gradients, non-maximum suppression and
/// hysteresis. Runs in fixed-point integer arithmetic, so the result is
/// exactly invariant to adding a constant to every pixel.
/// Throws InvalidParam if low > high, a threshold is negative, sigma <= 0,
/// or `gray` is not single-channel.
EdgeMap canny(const Image& gray, const CannyParams& params = {});

using KeypointId = std::int32_t;

struct Keypoint {
  int x = 0;
  int y = 0;
  KeypointId id = 0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// Greedy row-major thinning of edge pixels: a pixel is kept when no
/// already-kept keypoint lies within Chebyshev distance < stride. At most
/// max_n keypoints, ids 0..n-1 in scan order.
std::vector<Keypoint> sample_keypoints(const EdgeMap& edges, int stride, std::size_t max_n);

inline constexpr int kDescriptorCells = 4;
inline constexpr int kDescriptorBins = 8;
inline constexpr int kDescriptorSize = kDescriptorCells * kDescriptorCells * kDescriptorBins;

/// 128-D gradient orientation histogram over a square patch: 4x4 spatial
/// cells, 8 unsigned orientation bins, magnitude weighted, L2-normalized.
struct Descriptor {
  std::array<float, kDescriptorSize> v{};
  bool degenerate = true;  // zero gradient energy; v is all zeros
};

/// Describes the patch x patch window centered on kp (mirror padding at the
/// borders). `patch` must be even and >= 8.
Descriptor describe(const Image& gray, const Keypoint& kp, int patch = 16);

/// describe() over all keypoints, parallel over `jobs` threads. Output order
/// matches `keypoints`.
std::vector<Descriptor> describe_all(const Image& gray, std::span<const Keypoint> keypoints,
                                     int patch = 16, int jobs = 1);

}  // namespace repseg
