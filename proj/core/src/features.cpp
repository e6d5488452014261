#include "repseg/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "repseg/errors.hpp"
#include "repseg/parallel.hpp"

namespace repseg {

namespace {

// Gaussian taps are quantized so each 1-D pass sums to exactly 2^10; the
// smoothed image is therefore an exact integer multiple (2^20) of a true
// weighted average, and adding a constant shifts it by exactly c * 2^20.
constexpr int kTapBits = 10;
constexpr std::int64_t kTapSum = std::int64_t{1} << kTapBits;
constexpr double kSmoothScale = static_cast<double>(kTapSum * kTapSum);

// tan(22.5 deg) in Q15.
constexpr std::int64_t kTan22Q15 = 13573;

int mirror(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

std::vector<std::int64_t> gaussian_taps(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> w(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += w[i + radius];
  }
  std::vector<std::int64_t> taps(w.size());
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    taps[i] = std::llround(static_cast<double>(kTapSum) * w[i] / total);
    sum += taps[i];
  }
  taps[radius] += kTapSum - sum;
  return taps;
}

std::int64_t squared_threshold(double t) {
  const double scaled = t * kSmoothScale;
  const double sq = std::ceil(scaled * scaled);
  if (sq >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(sq);
}

}  // namespace

std::size_t EdgeMap::count() const noexcept {
  return static_cast<std::size_t>(std::count(edges.begin(), edges.end(), std::uint8_t{1}));
}

EdgeMap canny(const Image& gray, const CannyParams& params) {
  if (gray.channels() != 1) throw InvalidParam("canny: input must be single-channel");
  if (params.low < 0.0 || params.high < 0.0) throw InvalidParam("canny: thresholds must be >= 0");
  if (params.low > params.high) {
    throw InvalidParam("canny: low threshold " + std::to_string(params.low) +
                       " exceeds high threshold " + std::to_string(params.high));
  }
  if (!(params.gauss_sigma > 0.0)) throw InvalidParam("canny: gauss_sigma must be > 0");

  const int w = gray.width();
  const int h = gray.height();
  const std::size_t n = gray.pixel_count();
  const auto px = gray.data();
  const auto taps = gaussian_taps(params.gauss_sigma);
  const int radius = static_cast<int>(taps.size() / 2);

  std::vector<std::int64_t> horiz(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::int64_t acc = 0;
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[t + radius] * px[static_cast<std::size_t>(y) * w + mirror(x + t, w)];
      }
      horiz[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  std::vector<std::int64_t> smooth(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::int64_t acc = 0;
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[t + radius] * horiz[static_cast<std::size_t>(mirror(y + t, h)) * w + x];
      }
      smooth[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }

  auto s = [&](int x, int y) {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return smooth[static_cast<std::size_t>(y) * w + x];
  };
  std::vector<std::int64_t> gx(n), gy(n), mag2(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int64_t dx = (s(x + 1, y - 1) + 2 * s(x + 1, y) + s(x + 1, y + 1)) -
                              (s(x - 1, y - 1) + 2 * s(x - 1, y) + s(x - 1, y + 1));
      const std::int64_t dy = (s(x - 1, y + 1) + 2 * s(x, y + 1) + s(x + 1, y + 1)) -
                              (s(x - 1, y - 1) + 2 * s(x, y - 1) + s(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gx[i] = dx;
      gy[i] = dy;
      mag2[i] = dx * dx + dy * dy;
    }
  }

  const std::int64_t low2 = squared_threshold(params.low);
  const std::int64_t high2 = squared_threshold(params.high);

  // 0 = suppressed, 1 = weak, 2 = strong
  std::vector<std::uint8_t> state(n, 0);
  // Neighbors outside the image are clamped, like the Sobel stencil.
  auto at = [&](int x, int y) {
    return static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const std::int64_t m = mag2[i];
      if (m == 0 || m < low2) continue;
      const std::int64_t ax = std::abs(gx[i]);
      const std::int64_t ay = std::abs(gy[i]);
      int ox;
      int oy;
      if ((ay << 15) <= ax * kTan22Q15) {
        ox = 1;
        oy = 0;
      } else if ((ax << 15) <= ay * kTan22Q15) {
        ox = 0;
        oy = 1;
      } else if ((gx[i] > 0) == (gy[i] > 0)) {
        ox = 1;
        oy = 1;
      } else {
        ox = -1;
        oy = 1;
      }
      const std::size_t prev = at(x - ox, y - oy);
      const std::size_t next = at(x + ox, y + oy);
      if (m > mag2[prev] && m >= mag2[next]) state[i] = m >= high2 ? 2 : 1;
    }
  }

  EdgeMap out{w, h, std::vector<std::uint8_t>(n, 0)};
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] != 2 || out.edges[i]) continue;
    out.edges[i] = 1;
    stack.push_back(i);
    while (!stack.empty()) {
      const std::size_t j = stack.back();
      stack.pop_back();
      const int jx = static_cast<int>(j % w);
      const int jy = static_cast<int>(j / w);
      for (int oy = -1; oy <= 1; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          const int nx = jx + ox;
          const int ny = jy + oy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t k = static_cast<std::size_t>(ny) * w + nx;
          if (state[k] != 0 && !out.edges[k]) {
            out.edges[k] = 1;
            stack.push_back(k);
          }
        }
      }
    }
  }
  return out;
}

std::vector<Keypoint> sample_keypoints(const EdgeMap& edges, int stride, std::size_t max_n) {
  if (stride < 1) throw InvalidParam("sample_keypoints: stride must be >= 1");
  std::vector<Keypoint> kept;
  if (max_n == 0) return kept;
  const int cells_x = (edges.width + stride - 1) / stride;
  const int cells_y = (edges.height + stride - 1) / stride;
  std::vector<std::vector<std::int32_t>> buckets(static_cast<std::size_t>(cells_x) * cells_y);

  for (int y = 0; y < edges.height; ++y) {
    for (int x = 0; x < edges.width; ++x) {
      if (!edges.at(x, y)) continue;
      const int cx = x / stride;
      const int cy = y / stride;
      bool blocked = false;
      for (int by = std::max(0, cy - 1); by <= std::min(cells_y - 1, cy + 1) && !blocked; ++by) {
        for (int bx = std::max(0, cx - 1); bx <= std::min(cells_x - 1, cx + 1) && !blocked;
             ++bx) {
          for (auto id : buckets[static_cast<std::size_t>(by) * cells_x + bx]) {
            const auto& k = kept[static_cast<std::size_t>(id)];
            if (std::max(std::abs(k.x - x), std::abs(k.y - y)) < stride) {
              blocked = true;
              break;
            }
          }
        }
      }
      if (blocked) continue;
      const auto id = static_cast<KeypointId>(kept.size());
      kept.push_back({x, y, id});
      buckets[static_cast<std::size_t>(cy) * cells_x + cx].push_back(id);
      if (kept.size() == max_n) return kept;
    }
  }
  return kept;
}

Descriptor describe(const Image& gray, const Keypoint& kp, int patch) {
  if (gray.channels() != 1) throw InvalidParam("describe: input must be single-channel");
  if (patch < 8 || patch % 2 != 0) {
    throw InvalidParam("describe: patch must be even and >= 8, got " + std::to_string(patch));
  }
  const int w = gray.width();
  const int h = gray.height();
  auto pix = [&](int x, int y) { return static_cast<int>(gray.at(mirror(x, w), mirror(y, h))); };

  constexpr double kBinWidth = std::numbers::pi / kDescriptorBins;
  std::array<double, kDescriptorSize> hist{};
  const int half = patch / 2;
  for (int v = 0; v < patch; ++v) {
    const int y = kp.y - half + v;
    const int cell_y = v * kDescriptorCells / patch;
    for (int u = 0; u < patch; ++u) {
      const int x = kp.x - half + u;
      const int gx = pix(x + 1, y) - pix(x - 1, y);
      const int gy = pix(x, y + 1) - pix(x, y - 1);
      if (gx == 0 && gy == 0) continue;
      const double magnitude = std::sqrt(static_cast<double>(gx * gx + gy * gy));
      double theta = std::atan2(static_cast<double>(gy), static_cast<double>(gx));
      if (theta < 0.0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      // Linear interpolation between the two nearest bin centers, cyclic.
      const double pos = theta / kBinWidth - 0.5;
      const double lo = std::floor(pos);
      const double frac = pos - lo;
      const int b0 = (static_cast<int>(lo) + kDescriptorBins) % kDescriptorBins;
      const int b1 = (b0 + 1) % kDescriptorBins;
      const int cell_x = u * kDescriptorCells / patch;
      const int base = (cell_y * kDescriptorCells + cell_x) * kDescriptorBins;
      hist[base + b0] += magnitude * (1.0 - frac);
      hist[base + b1] += magnitude * frac;
    }
  }

  double norm2 = 0.0;
  for (double x : hist) norm2 += x * x;
  Descriptor d;
  if (norm2 <= 0.0) return d;
  const double inv = 1.0 / std::sqrt(norm2);
  for (int i = 0; i < kDescriptorSize; ++i) d.v[i] = static_cast<float>(hist[i] * inv);
  d.degenerate = false;
  return d;
}

std::vector<Descriptor> describe_all(const Image& gray, std::span<const Keypoint> keypoints,
                                     int patch, int jobs) {
  std::vector<Descriptor> out(keypoints.size());
  parallel_for(keypoints.size(), jobs,
               [&](std::size_t i) { out[i] = describe(gray, keypoints[i], patch); });
  return out;
}

}  // namespace repseg
