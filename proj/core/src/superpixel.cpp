#include "repseg/superpixel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "repseg/errors.hpp"

namespace repseg {

namespace {

struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

double lab_f(double t) {
  constexpr double eps = 216.0 / 24389.0;
  constexpr double kappa = 24389.0 / 27.0;
  return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
}

std::array<double, 256> srgb_to_linear_table() {
  std::array<double, 256> t{};
  for (int i = 0; i < 256; ++i) {
    const double c = i / 255.0;
    t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  }
  return t;
}

std::vector<Lab> to_lab(const Image& img) {
  static const auto lin = srgb_to_linear_table();
  // D65 reference white.
  constexpr double xn = 0.95047;
  constexpr double zn = 1.08883;
  const auto px = img.data();
  std::vector<Lab> out(img.pixel_count());
  if (img.channels() == 1) {
    std::array<double, 256> lum{};
    for (int i = 0; i < 256; ++i) lum[i] = 116.0 * lab_f(lin[i]) - 16.0;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {lum[px[i]], 0.0, 0.0};
    return out;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = lin[px[3 * i]];
    const double g = lin[px[3 * i + 1]];
    const double b = lin[px[3 * i + 2]];
    const double x = r * 0.4124564 + g * 0.3575761 + b * 0.1804375;
    const double y = r * 0.2126729 + g * 0.7151522 + b * 0.0721750;
    const double z = r * 0.0193339 + g * 0.1191920 + b * 0.9503041;
    const double fx = lab_f(x / xn);
    const double fy = lab_f(y);
    const double fz = lab_f(z / zn);
    out[i] = {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
  }
  return out;
}

double lab_dist2(const Lab& p, const Lab& q) {
  const double dl = p.l - q.l;
  const double da = p.a - q.a;
  const double db = p.b - q.b;
  return dl * dl + da * da + db * db;
}

struct Cluster {
  Lab color;
  double x = 0.0;
  double y = 0.0;
};

// Every component except the largest one of its cluster label is an orphan.
// Orphans merge into their largest 4-adjacent component, smallest first.
// Returns dense labels.
std::vector<std::int32_t> enforce_connectivity(const std::vector<std::int32_t>& labels, int w,
                                               int h, std::int32_t nlabels,
                                               std::int32_t& count) {
  const std::size_t n = labels.size();
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::size_t> size;
  std::vector<std::size_t> queue;
  queue.reserve(n);
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (comp[seed] >= 0) continue;
    const auto id = static_cast<std::int32_t>(size.size());
    comp[seed] = id;
    queue.clear();
    queue.push_back(seed);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t i = queue[head];
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const std::size_t nbrs[4] = {x > 0 ? i - 1 : n, x + 1 < w ? i + 1 : n,
                                   y > 0 ? i - w : n, y + 1 < h ? i + w : n};
      for (std::size_t j : nbrs) {
        if (j < n && comp[j] < 0 && labels[j] == labels[seed]) {
          comp[j] = id;
          queue.push_back(j);
        }
      }
    }
    size.push_back(queue.size());
  }

  const std::size_t ncomp = size.size();
  std::vector<std::vector<std::int32_t>> adj(ncomp);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (x + 1 < w && comp[i] != comp[i + 1]) {
        adj[comp[i]].push_back(comp[i + 1]);
        adj[comp[i + 1]].push_back(comp[i]);
      }
      if (y + 1 < h && comp[i] != comp[i + w]) {
        adj[comp[i]].push_back(comp[i + w]);
        adj[comp[i + w]].push_back(comp[i]);
      }
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  std::vector<std::int32_t> parent(ncomp);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int32_t c) {
    while (parent[c] != c) {
      parent[c] = parent[parent[c]];
      c = parent[c];
    }
    return c;
  };

  // Primary component per label: largest, first in scan order on ties.
  std::vector<std::int32_t> primary(static_cast<std::size_t>(nlabels), -1);
  std::vector<std::int32_t> label_of(ncomp);
  for (std::size_t i = 0; i < n; ++i) label_of[comp[i]] = labels[i];
  for (std::size_t c = 0; c < ncomp; ++c) {
    auto& p = primary[static_cast<std::size_t>(label_of[c])];
    if (p < 0 || size[c] > size[p]) p = static_cast<std::int32_t>(c);
  }
  std::vector<std::int32_t> orphans;
  for (std::size_t c = 0; c < ncomp; ++c) {
    if (primary[static_cast<std::size_t>(label_of[c])] != static_cast<std::int32_t>(c)) {
      orphans.push_back(static_cast<std::int32_t>(c));
    }
  }
  std::stable_sort(orphans.begin(), orphans.end(),
                   [&](std::int32_t a, std::int32_t b) { return size[a] < size[b]; });
  for (auto o : orphans) {
    if (find(o) != o) continue;
    std::int32_t target = -1;
    for (auto nb : adj[o]) {
      const auto root = find(nb);
      if (root == o) continue;
      if (target < 0 || size[root] > size[target] ||
          (size[root] == size[target] && root < target)) {
        target = root;
      }
    }
    if (target < 0) continue;
    parent[o] = target;
    size[target] += size[o];
    auto& ta = adj[target];
    ta.insert(ta.end(), adj[o].begin(), adj[o].end());
    std::sort(ta.begin(), ta.end());
    ta.erase(std::unique(ta.begin(), ta.end()), ta.end());
  }

  std::vector<std::int32_t> dense(ncomp, -1);
  std::vector<std::int32_t> out(n);
  count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(comp[i]);
    if (dense[root] < 0) dense[root] = count++;
    out[i] = dense[root];
  }
  return out;
}

}  // namespace

void SlicParams::validate(const Image& img) const {
  const auto n = static_cast<long long>(img.pixel_count());
  if (superpixels < 1 || superpixels > n) {
    throw InvalidParam("slic: superpixel count must be in [1, " + std::to_string(n) + "], got " +
                       std::to_string(superpixels));
  }
  if (!(compactness > 0.0)) throw InvalidParam("slic: compactness must be > 0");
  if (iterations < 0) throw InvalidParam("slic: iterations must be >= 0");
}

SuperpixelMap slic(const Image& img, const SlicParams& params) {
  params.validate(img);
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.pixel_count();
  const auto lab = to_lab(img);

  const double step = std::sqrt(static_cast<double>(n) / params.superpixels);
  const int nx = std::clamp(static_cast<int>(std::lround(w / step)), 1, w);
  const int ny = std::clamp(static_cast<int>(std::lround(h / step)), 1, h);

  auto grad = [&](int x, int y) {
    const auto at = [&](int xx, int yy) -> const Lab& {
      xx = std::clamp(xx, 0, w - 1);
      yy = std::clamp(yy, 0, h - 1);
      return lab[static_cast<std::size_t>(yy) * w + xx];
    };
    return lab_dist2(at(x + 1, y), at(x - 1, y)) + lab_dist2(at(x, y + 1), at(x, y - 1));
  };

  std::vector<Cluster> clusters;
  clusters.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int sx = static_cast<int>((i + 0.5) * w / nx);
      int sy = static_cast<int>((j + 0.5) * h / ny);
      // Move the seed to the lowest-gradient pixel of its 3x3 neighborhood;
      // it stays put unless a neighbor is strictly lower.
      double best = grad(sx, sy);
      int bx = sx;
      int by = sy;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = sx + dx;
          const int y = sy + dy;
          if (x < 0 || y < 0 || x >= w || y >= h) continue;
          const double g = grad(x, y);
          if (g < best) {
            best = g;
            bx = x;
            by = y;
          }
        }
      }
      sx = bx;
      sy = by;
      clusters.push_back({lab[static_cast<std::size_t>(sy) * w + sx], double(sx), double(sy)});
    }
  }

  // Pixels outside every search window keep their previous assignment; start
  // from the seed-grid cell containing them.
  std::vector<std::int32_t> labels(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int cx = std::min(nx - 1, x * nx / w);
      const int cy = std::min(ny - 1, y * ny / h);
      labels[static_cast<std::size_t>(y) * w + x] = cy * nx + cx;
    }
  }

  const double spatial = params.compactness / step;
  const int window = static_cast<int>(std::ceil(step));
  std::vector<double> dist(n);
  for (int it = 0; it < params.iterations; ++it) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      const auto& c = clusters[k];
      const int x0 = std::max(0, static_cast<int>(std::floor(c.x)) - window);
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(c.x)) + window);
      const int y0 = std::max(0, static_cast<int>(std::floor(c.y)) - window);
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(c.y)) + window);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          const double dxy = std::hypot(x - c.x, y - c.y);
          const double d = std::sqrt(lab_dist2(lab[i], c.color)) + spatial * dxy;
          if (d < dist[i]) {
            dist[i] = d;
            labels[i] = static_cast<std::int32_t>(k);
          }
        }
      }
    }

    std::vector<Cluster> sums(clusters.size());
    std::vector<std::size_t> counts(clusters.size(), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        auto& s = sums[static_cast<std::size_t>(labels[i])];
        s.color.l += lab[i].l;
        s.color.a += lab[i].a;
        s.color.b += lab[i].b;
        s.x += x;
        s.y += y;
        ++counts[static_cast<std::size_t>(labels[i])];
      }
    }
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      if (counts[k] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[k]);
      clusters[k] = {{sums[k].color.l * inv, sums[k].color.a * inv, sums[k].color.b * inv},
                     sums[k].x * inv,
                     sums[k].y * inv};
    }
  }

  SuperpixelMap out;
  out.width = w;
  out.height = h;
  out.assignment = enforce_connectivity(labels, w, h, static_cast<std::int32_t>(clusters.size()), out.count);
  return out;
}

Image superpixel_overlay(const Image& img, const SuperpixelMap& spx) {
  const int w = img.width();
  const int h = img.height();
  std::vector<std::uint8_t> rgb(img.pixel_count() * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const bool boundary = (x + 1 < w && spx.at(x + 1, y) != spx.at(x, y)) ||
                            (y + 1 < h && spx.at(x, y + 1) != spx.at(x, y));
      for (int c = 0; c < 3; ++c) {
        const std::uint8_t v = img.at(x, y, img.channels() == 1 ? 0 : c);
        rgb[3 * i + c] = boundary ? (c == 0 ? 255 : 0) : v;
      }
    }
  }
  return Image(w, h, 3, std::move(rgb));
}

}  // namespace repseg
