#include "repseg/accumulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repseg/errors.hpp"
#include "repseg/parallel.hpp"

namespace repseg {

void AccumulatorParams::validate() const {
  if (!(sigma > 0.0)) throw InvalidParam("accumulator: sigma must be > 0");
  if (bin < 1) throw InvalidParam("accumulator: bin must be >= 1, got " + std::to_string(bin));
  if (half_extent < 0) throw InvalidParam("accumulator: half_extent must be >= 0");
}

AccumulatorSpace::AccumulatorSpace(int bin, int half_extent, double sigma)
    : bin_(bin), half_extent_(half_extent), sigma_(sigma) {
  if (!(sigma > 0.0)) throw InvalidParam("accumulator: sigma must be > 0");
  if (bin < 1) throw InvalidParam("accumulator: bin must be >= 1");
  if (half_extent < 1) throw InvalidParam("accumulator: half_extent must be >= 1");
  radius_ = (half_extent + bin - 1) / bin;
  grid_.assign(static_cast<std::size_t>(side()) * side(), 0.0);
  build_kernel();
}

void AccumulatorSpace::build_kernel() {
  // Cells whose center lies within 3 sigma of the voting cell's center.
  const double reach = 3.0 * sigma_;
  kernel_radius_ = static_cast<int>(std::floor(reach / bin_));
  const int kside = 2 * kernel_radius_ + 1;
  kernel_.assign(static_cast<std::size_t>(kside) * kside, 0.0);
  const double inv_two_var = 1.0 / (2.0 * sigma_ * sigma_);
  for (int i = -kernel_radius_; i <= kernel_radius_; ++i) {
    for (int j = -kernel_radius_; j <= kernel_radius_; ++j) {
      const double d2 = static_cast<double>(i * i + j * j) * bin_ * bin_;
      if (d2 > reach * reach) continue;
      kernel_[static_cast<std::size_t>(i + kernel_radius_) * kside + (j + kernel_radius_)] =
          std::exp(-d2 * inv_two_var);
    }
  }
}

AccumulatorCell AccumulatorSpace::cell_of(int dx, int dy) const noexcept {
  auto index = [&](int d) {
    const long q = std::lround(static_cast<double>(d) / bin_);
    return static_cast<int>(std::clamp<long>(q + radius_, 0, 2L * radius_));
  };
  return {index(dy), index(dx)};
}

double AccumulatorSpace::total_mass() const noexcept {
  double total = 0.0;
  for (double v : grid_) total += v;
  return total;
}

void AccumulatorSpace::deposit(int dx, int dy) {
  const auto c = cell_of(dx, dy);
  const int kside = 2 * kernel_radius_ + 1;
  const int n = side();
  const int r0 = std::max(0, c.row - kernel_radius_);
  const int r1 = std::min(n - 1, c.row + kernel_radius_);
  const int c0 = std::max(0, c.col - kernel_radius_);
  const int c1 = std::min(n - 1, c.col + kernel_radius_);

  double mass = 0.0;
  for (int r = r0; r <= r1; ++r) {
    for (int q = c0; q <= c1; ++q) {
      mass += kernel_[static_cast<std::size_t>(r - c.row + kernel_radius_) * kside +
                      (q - c.col + kernel_radius_)];
    }
  }
  const double scale = 1.0 / mass;
  for (int r = r0; r <= r1; ++r) {
    for (int q = c0; q <= c1; ++q) {
      const double w = kernel_[static_cast<std::size_t>(r - c.row + kernel_radius_) * kside +
                               (q - c.col + kernel_radius_)];
      if (w == 0.0) continue;
      double& cell = grid_[static_cast<std::size_t>(r) * n + q];
      cell += w * scale;
      max_ = std::max(max_, cell);
    }
  }
  ++votes_;
}

void AccumulatorSpace::merge(const AccumulatorSpace& other) {
  if (other.bin_ != bin_ || other.radius_ != radius_ || other.sigma_ != sigma_) {
    throw InvalidParam("accumulator: cannot merge spaces with different geometry");
  }
  max_ = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    grid_[i] += other.grid_[i];
    max_ = std::max(max_, grid_[i]);
  }
  votes_ += other.votes_;
}

std::vector<AccumulatorPeak> AccumulatorSpace::peaks(std::size_t max_count,
                                                     double exclude_radius) const {
  const int n = side();
  std::vector<AccumulatorPeak> found;
  for (int r = 0; r < n; ++r) {
    for (int q = 0; q < n; ++q) {
      const double v = at(r, q);
      if (v <= 0.0) continue;
      const int dx = (q - radius_) * bin_;
      const int dy = (r - radius_) * bin_;
      if (std::hypot(dx, dy) <= exclude_radius) continue;
      bool is_max = true;
      for (int i = -1; i <= 1 && is_max; ++i) {
        for (int j = -1; j <= 1; ++j) {
          if (i == 0 && j == 0) continue;
          const int rr = r + i;
          const int qq = q + j;
          if (rr < 0 || qq < 0 || rr >= n || qq >= n) continue;
          const double u = at(rr, qq);
          // Plateaus report their first cell in row-major order.
          const bool earlier = i < 0 || (i == 0 && j < 0);
          if (u > v || (earlier && u == v)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) found.push_back({r, q, dx, dy, v});
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });
  if (found.size() > max_count) found.resize(max_count);
  return found;
}

AccumulatorSpace vote(std::span<const Splash> splashes, const AccumulatorParams& params,
                      int jobs) {
  params.validate();
  if (params.half_extent < 1) {
    throw InvalidParam("accumulator: half_extent must be resolved to >= 1 before voting");
  }
  auto fill = [&](AccumulatorSpace& acc, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& v : splashes[i].vectors) acc.deposit(v.dx, v.dy);
    }
  };
  AccumulatorSpace acc(params.bin, params.half_extent, params.sigma);
  const std::size_t blocks =
      std::min<std::size_t>(splashes.size(), static_cast<std::size_t>(std::max(1, jobs)));
  if (blocks <= 1) {
    fill(acc, 0, splashes.size());
    return acc;
  }
  std::vector<AccumulatorSpace> partial(blocks,
                                        AccumulatorSpace(params.bin, params.half_extent,
                                                         params.sigma));
  const std::size_t size = (splashes.size() + blocks - 1) / blocks;
  parallel_for(blocks, jobs, [&](std::size_t b) {
    fill(partial[b], b * size, std::min(splashes.size(), (b + 1) * size));
  });
  for (const auto& p : partial) acc.merge(p);
  return acc;
}

double score_splash(const AccumulatorSpace& acc, const Splash& splash) {
  if (splash.vectors.empty() || acc.max_value() <= 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& v : splash.vectors) sum += acc.value_at(v.dx, v.dy);
  const double s = sum / static_cast<double>(splash.vectors.size()) / acc.max_value();
  return std::clamp(s, 0.0, 1.0);
}

std::vector<Hotspot> select_hotspots(const AccumulatorSpace& acc, std::span<const Splash> splashes,
                                     double tau) {
  std::vector<Hotspot> out;
  for (std::size_t i = 0; i < splashes.size(); ++i) {
    const double s = score_splash(acc, splashes[i]);
    if (s >= tau) out.push_back({static_cast<SplashId>(i), s});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Hotspot& a, const Hotspot& b) { return a.score > b.score; });
  return out;
}

}  // namespace repseg
