#include "repseg/corrupt.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "repseg/errors.hpp"
#include "repseg/rng.hpp"

namespace repseg {

namespace {

std::uint8_t to_u8(double v) {
  // Round half to even, then clamp.
  return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0));
}

int mirror(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

Image map_values(const Image& img, auto&& fn) {
  std::vector<std::uint8_t> out(img.data().size());
  std::transform(img.data().begin(), img.data().end(), out.begin(),
                 [&](std::uint8_t v) { return to_u8(fn(static_cast<double>(v))); });
  return Image(img.width(), img.height(), img.channels(), std::move(out));
}

Image gaussian_noise(const Image& img, std::uint64_t seed) {
  // One sample per pixel, shared across channels.
  CounterRng rng(seed);
  const int ch = img.channels();
  const auto src = img.data();
  std::vector<std::uint8_t> out(src.size());
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const double noise = rng.normal(0.0, kNoiseScale);
    for (int c = 0; c < ch; ++c) {
      out[p * ch + c] = to_u8(src[p * ch + c] + noise);
    }
  }
  return Image(img.width(), img.height(), ch, std::move(out));
}

Image gaussian_blur(const Image& img, double sigma) {
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += k[i + radius];
  }
  for (auto& v : k) v /= total;

  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  std::vector<double> tmp(img.data().size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) acc += k[t + radius] * img.at(mirror(x + t, w), y, c);
        tmp[(static_cast<std::size_t>(y) * w + x) * ch + c] = acc;
      }
    }
  }
  std::vector<std::uint8_t> out(tmp.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          acc += k[t + radius] * tmp[(static_cast<std::size_t>(mirror(y + t, h)) * w + x) * ch + c];
        }
        out[(static_cast<std::size_t>(y) * w + x) * ch + c] = to_u8(acc);
      }
    }
  }
  return Image(w, h, ch, std::move(out));
}

// Control points on a G x G grid spanning the image get Gaussian offsets;
// each grid cell is split into two triangles and the offset field is
// interpolated affinely inside each. Output pixels sample the input at
// p - offset(p).
class WarpField {
 public:
  WarpField(int w, int h, std::uint64_t seed) {
    const double stddev = kPiecewiseAffineScale * std::min(w, h);
    CounterRng rng(seed);
    for (int i = 0; i < G; ++i) {
      for (int j = 0; j < G; ++j) {
        off_y_[i][j] = rng.normal(0.0, stddev);
        off_x_[i][j] = rng.normal(0.0, stddev);
      }
    }
    cell_w_ = (w - 1) / double(G - 1);
    cell_h_ = (h - 1) / double(G - 1);
  }

  std::pair<double, double> offset(int x, int y) const {
    double u = cell_w_ > 0 ? x / cell_w_ : 0.0;
    double v = cell_h_ > 0 ? y / cell_h_ : 0.0;
    const int j = std::min(static_cast<int>(u), G - 2);
    const int i = std::min(static_cast<int>(v), G - 2);
    u -= j;
    v -= i;
    // Triangles (00,10,11) below the diagonal and (00,01,11) above it.
    double w00, w10, w01, w11;
    if (u >= v) {
      w00 = 1 - u;
      w10 = u - v;
      w11 = v;
      w01 = 0;
    } else {
      w00 = 1 - v;
      w01 = v - u;
      w11 = u;
      w10 = 0;
    }
    const double dx = w00 * off_x_[i][j] + w10 * off_x_[i][j + 1] + w01 * off_x_[i + 1][j] +
                      w11 * off_x_[i + 1][j + 1];
    const double dy = w00 * off_y_[i][j] + w10 * off_y_[i][j + 1] + w01 * off_y_[i + 1][j] +
                      w11 * off_y_[i + 1][j + 1];
    return {dx, dy};
  }

 private:
  static constexpr int G = kPiecewiseAffineGrid;
  double off_x_[G][G];
  double off_y_[G][G];
  double cell_w_ = 0.0;
  double cell_h_ = 0.0;
};

// Bilinear sampling with edge clamping.
Image piecewise_affine(const Image& img, std::uint64_t seed) {
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  const WarpField field(w, h, seed);

  auto sample = [&](double x, double y, int c) {
    x = std::clamp(x, 0.0, double(w - 1));
    y = std::clamp(y, 0.0, double(h - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double tx = x - x0;
    const double ty = y - y0;
    return (1 - ty) * ((1 - tx) * img.at(x0, y0, c) + tx * img.at(x1, y0, c)) +
           ty * ((1 - tx) * img.at(x0, y1, c) + tx * img.at(x1, y1, c));
  };

  std::vector<std::uint8_t> out(img.data().size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto [dx, dy] = field.offset(x, y);
      for (int c = 0; c < ch; ++c) {
        out[(static_cast<std::size_t>(y) * w + x) * ch + c] = to_u8(sample(x - dx, y - dy, c));
      }
    }
  }
  return Image(w, h, ch, std::move(out));
}

// Same field as piecewise_affine, nearest-neighbor sampling (round half up).
LabelMask piecewise_affine(const LabelMask& mask, std::uint64_t seed) {
  const int w = mask.width();
  const int h = mask.height();
  const WarpField field(w, h, seed);
  std::vector<std::uint32_t> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto [dx, dy] = field.offset(x, y);
      const int sx = std::clamp(static_cast<int>(std::floor(x - dx + 0.5)), 0, w - 1);
      const int sy = std::clamp(static_cast<int>(std::floor(y - dy + 0.5)), 0, h - 1);
      out[static_cast<std::size_t>(y) * w + x] = mask.at(sx, sy);
    }
  }
  return LabelMask::densified(w, h, std::move(out));
}

}  // namespace

std::string_view to_string(CorruptionKind kind) noexcept {
  switch (kind) {
    case CorruptionKind::GaussianNoise: return "gaussian_noise";
    case CorruptionKind::GaussianBlur: return "gaussian_blur";
    case CorruptionKind::PiecewiseAffine: return "piecewise_affine";
    case CorruptionKind::Brightness: return "brightness";
    case CorruptionKind::LinearContrast: return "linear_contrast";
  }
  return "unknown";
}

CorruptionKind parse_corruption(std::string_view name) {
  for (auto kind : kAllCorruptions) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidParam("unknown corruption kind '" + std::string(name) +
                     "' (expected gaussian_noise, gaussian_blur, piecewise_affine, brightness "
                     "or linear_contrast)");
}

Image corrupt(const Image& img, CorruptionKind kind, std::uint64_t seed) {
  switch (kind) {
    case CorruptionKind::GaussianNoise:
      return gaussian_noise(img, seed);
    case CorruptionKind::GaussianBlur:
      return gaussian_blur(img, kBlurSigma);
    case CorruptionKind::PiecewiseAffine:
      return piecewise_affine(img, seed);
    case CorruptionKind::Brightness:
      return map_values(img, [](double v) { return v + kBrightnessShift; });
    case CorruptionKind::LinearContrast:
      return map_values(img, [](double v) { return 127.5 + kContrastGain * (v - 127.5); });
  }
  throw InvalidParam("unknown corruption kind");
}

LabelMask corrupt_mask(const LabelMask& mask, CorruptionKind kind, std::uint64_t seed) {
  if (kind == CorruptionKind::PiecewiseAffine) return piecewise_affine(mask, seed);
  return mask;
}

}  // namespace repseg
