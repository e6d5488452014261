#include "repseg/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "repseg/errors.hpp"
#include "repseg/rng.hpp"

namespace repseg {

namespace {

struct Rgb {
  double r, g, b;
};

// Dark saturated foregrounds against a light neutral background.
constexpr std::array<Rgb, kBuiltinIcons> kIconColors = {{
    {10, 20, 70},
    {80, 8, 12},
    {8, 50, 16},
    {18, 18, 18},
    {60, 12, 70},
    {70, 30, 0},
}};
constexpr Rgb kBackground = {226, 224, 216};
// Foreground weight of the outermost icon pixels. A half tone rim puts the
// steepest intensity change on the icon instead of beside it.
constexpr double kRimWeight = 0.62;

// Value noise amplitude and lattice pitch for the background texture.
constexpr double kTextureAmplitude = 9.0;
constexpr int kTexturePitch = 8;
constexpr double kGrainAmplitude = 2.0;

}  // namespace

void SynthSpec::validate() const {
  auto fail = [](const std::string& what) { throw InvalidParam("synth: " + what); };
  if (icon < 0 || icon >= kBuiltinIcons) {
    fail("icon must be in [0, " + std::to_string(kBuiltinIcons - 1) + "]");
  }
  if (rows < 1 || cols < 1) fail("rows and cols must be >= 1");
  if (icon_size < 8) fail("icon_size must be >= 8");
  if (jitter < 0) fail("jitter must be >= 0");
  if (period < icon_size + 2 * jitter) {
    fail("icon (" + std::to_string(icon_size) + " px + 2x" + std::to_string(jitter) +
         " px jitter) does not fit within period " + std::to_string(period));
  }
  const int span_x = (cols - 1) * period + icon_size + 2 * jitter;
  const int span_y = (rows - 1) * period + icon_size + 2 * jitter;
  if (canvas < 1 || span_x > canvas || span_y > canvas) {
    fail("grid spans " + std::to_string(std::max(span_x, span_y)) +
         " px, larger than canvas " + std::to_string(canvas));
  }
}

std::vector<std::uint8_t> icon_shape(int icon, int s) {
  if (icon < 0 || icon >= kBuiltinIcons) throw InvalidParam("icon_shape: unknown icon");
  std::vector<std::uint8_t> m(static_cast<std::size_t>(s) * s, 0);
  const double c = (s - 1) / 2.0;
  const double half = s / 2.0;
  for (int y = 0; y < s; ++y) {
    for (int x = 0; x < s; ++x) {
      const double dx = x - c;
      const double dy = y - c;
      const double d = std::hypot(dx, dy);
      bool in = false;
      switch (icon) {
        case 0:  // square
          in = true;
          break;
        case 1:  // disc
          in = d <= half;
          break;
        case 2:  // tee
          in = y < s / 3 || std::abs(dx) <= s / 6.0;
          break;
        case 3:  // plus
          in = std::abs(dx) <= s / 6.0 || std::abs(dy) <= s / 6.0;
          break;
        case 4:  // diamond
          in = std::abs(dx) + std::abs(dy) <= half;
          break;
        case 5:  // ell
          in = x < s / 3 || y >= s - s / 3;
          break;
        default:
          break;
      }
      m[static_cast<std::size_t>(y) * s + x] = in ? 1 : 0;
    }
  }
  return m;
}

std::pair<Image, GroundTruth> synth(const SynthSpec& spec) {
  spec.validate();
  const int n = spec.canvas;
  const std::size_t npx = static_cast<std::size_t>(n) * n;
  CounterRng rng(spec.seed);

  // Background: bilinear value noise on a coarse lattice plus fine grain.
  const int lattice = n / kTexturePitch + 2;
  std::vector<double> knots(static_cast<std::size_t>(lattice) * lattice);
  for (auto& k : knots) k = (rng.uniform() * 2.0 - 1.0) * kTextureAmplitude;
  std::vector<double> shade(npx);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double fx = static_cast<double>(x) / kTexturePitch;
      const double fy = static_cast<double>(y) / kTexturePitch;
      const int ix = static_cast<int>(fx);
      const int iy = static_cast<int>(fy);
      const double tx = fx - ix;
      const double ty = fy - iy;
      auto k = [&](int a, int b) { return knots[static_cast<std::size_t>(b) * lattice + a]; };
      const double v = (1 - ty) * ((1 - tx) * k(ix, iy) + tx * k(ix + 1, iy)) +
                       ty * ((1 - tx) * k(ix, iy + 1) + tx * k(ix + 1, iy + 1));
      shade[static_cast<std::size_t>(y) * n + x] =
          v + (rng.uniform() * 2.0 - 1.0) * kGrainAmplitude;
    }
  }

  const int s = spec.icon_size;
  const auto shape = icon_shape(spec.icon, s);
  auto inside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < s && y < s && shape[static_cast<std::size_t>(y) * s + x];
  };

  // Chessboard distance from each icon pixel to the nearest non-icon pixel,
  // capped at 2.
  std::vector<int> depth(static_cast<std::size_t>(s) * s, 0);
  for (int v = 0; v < s; ++v) {
    for (int u = 0; u < s; ++u) {
      if (!inside(u, v)) continue;
      bool edge = false;
      for (int b = -1; b <= 1 && !edge; ++b) {
        for (int a = -1; a <= 1; ++a) edge = edge || !inside(u + a, v + b);
      }
      depth[static_cast<std::size_t>(v) * s + u] = edge ? 1 : 2;
    }
  }

  std::vector<std::uint32_t> instance(npx, 0);
  const int span_x = (spec.cols - 1) * spec.period + s;
  const int span_y = (spec.rows - 1) * spec.period + s;
  const int ox = (n - span_x) / 2;
  const int oy = (n - span_y) / 2;
  int min_x = n, min_y = n, max_x = -1, max_y = -1;

  std::vector<std::uint8_t> rgb(npx * 3);
  std::vector<double> fg_weight(npx, 0.0);
  for (int i = 0; i < spec.rows; ++i) {
    for (int j = 0; j < spec.cols; ++j) {
      int jx = 0;
      int jy = 0;
      if (spec.jitter > 0) {
        const int span = 2 * spec.jitter + 1;
        jx = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(span)) - spec.jitter;
        jy = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(span)) - spec.jitter;
      }
      const int x0 = ox + j * spec.period + jx;
      const int y0 = oy + i * spec.period + jy;
      const auto id = static_cast<std::uint32_t>(i * spec.cols + j + 1);
      for (int v = 0; v < s; ++v) {
        for (int u = 0; u < s; ++u) {
          if (!inside(u, v)) continue;
          const std::size_t p = static_cast<std::size_t>(y0 + v) * n + (x0 + u);
          instance[p] = id;
          fg_weight[p] = depth[static_cast<std::size_t>(v) * s + u] == 1 ? kRimWeight : 1.0;
          min_x = std::min(min_x, x0 + u);
          max_x = std::max(max_x, x0 + u);
          min_y = std::min(min_y, y0 + v);
          max_y = std::max(max_y, y0 + v);
        }
      }
    }
  }

  const Rgb fg = kIconColors[static_cast<std::size_t>(spec.icon)];
  for (std::size_t p = 0; p < npx; ++p) {
    const double a = fg_weight[p];
    const double t = shade[p];
    const double r = a * fg.r + (1 - a) * (kBackground.r + t);
    const double g = a * fg.g + (1 - a) * (kBackground.g + t);
    const double b = a * fg.b + (1 - a) * (kBackground.b + t);
    rgb[3 * p] = static_cast<std::uint8_t>(std::clamp(std::lround(r), 0L, 255L));
    rgb[3 * p + 1] = static_cast<std::uint8_t>(std::clamp(std::lround(g), 0L, 255L));
    rgb[3 * p + 2] = static_cast<std::uint8_t>(std::clamp(std::lround(b), 0L, 255L));
  }

  std::vector<std::uint32_t> pattern(npx, 0);
  for (int y = min_y; y <= max_y; ++y) {
    for (int x = min_x; x <= max_x; ++x) pattern[static_cast<std::size_t>(y) * n + x] = 1;
  }

  GroundTruth truth;
  truth.levels.emplace("instance", LabelMask(n, n, std::move(instance)));
  truth.levels.emplace("pattern", LabelMask(n, n, std::move(pattern)));
  return {Image(n, n, 3, std::move(rgb)), std::move(truth)};
}

}  // namespace repseg
