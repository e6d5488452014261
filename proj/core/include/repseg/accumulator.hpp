#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repseg/splash.hpp"

namespace repseg {

struct AccumulatorParams {
  double sigma = 3.0;    // vote spread (px)
  int bin = 2;           // px per cell
  int half_extent = 0;   // px; 0 means min(width, height) of the image

  void validate() const;
};

struct AccumulatorCell {
  int row = 0;
  int col = 0;
};

struct AccumulatorPeak {
  int row = 0;
  int col = 0;
  int dx = 0;  // displacement at the cell center (px)
  int dy = 0;
  double value = 0.0;
};

/// Quantized displacement-vote grid. Rows index dy, columns index dx; the
/// center cell is displacement (0, 0).
class AccumulatorSpace {
 public:
  AccumulatorSpace(int bin, int half_extent, double sigma);

  int bin() const noexcept { return bin_; }
  int half_extent() const noexcept { return half_extent_; }
  double sigma() const noexcept { return sigma_; }
  /// Cells from the center to one edge; side() == 2 * radius_cells() + 1.
  int radius_cells() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }

  std::span<const double> grid() const noexcept { return grid_; }
  double at(int row, int col) const noexcept {
    return grid_[static_cast<std::size_t>(row) * side() + col];
  }

  /// Cell receiving displacement (dx, dy); out-of-range displacements clamp
  /// to the boundary cell.
  AccumulatorCell cell_of(int dx, int dy) const noexcept;
  double value_at(int dx, int dy) const noexcept {
    const auto c = cell_of(dx, dy);
    return at(c.row, c.col);
  }

  double total_mass() const noexcept;
  double max_value() const noexcept { return max_; }
  std::size_t vote_count() const noexcept { return votes_; }

  /// Adds one unit-mass truncated Gaussian (3 sigma) centered on the cell of
  /// (dx, dy), renormalized over the cells that fall inside the grid.
  void deposit(int dx, int dy);
  /// Elementwise sum; both spaces must share geometry.
  void merge(const AccumulatorSpace& other);

  /// Local maxima (8-neighborhood, value > 0) sorted by descending value,
  /// ties by row-major index, skipping cells whose displacement is within
  /// `exclude_radius` px of the origin.
  std::vector<AccumulatorPeak> peaks(std::size_t max_count, double exclude_radius) const;

 private:
  void build_kernel();

  int bin_;
  int half_extent_;
  double sigma_;
  int radius_;
  int kernel_radius_ = 0;
  std::vector<double> kernel_;  // (2*kernel_radius_+1)^2, unnormalized
  std::vector<double> grid_;
  double max_ = 0.0;
  std::size_t votes_ = 0;
};

/// Every splash vector deposits into a fresh space, in splash order then
/// vector order. `jobs > 1` accumulates fixed splash blocks into partial
/// grids merged in block order; sums agree with the sequential path to
/// rounding.
AccumulatorSpace vote(std::span<const Splash> splashes, const AccumulatorParams& params,
                      int jobs = 1);

/// Mean accumulator value along the splash's vectors over the global max;
/// in [0, 1]. Returns 0 for an empty space or empty splash.
double score_splash(const AccumulatorSpace& acc, const Splash& splash);

using SplashId = std::int32_t;

struct Hotspot {
  SplashId splash = 0;
  double score = 0.0;
};

/// Splashes with score >= tau, by descending score then splash id.
std::vector<Hotspot> select_hotspots(const AccumulatorSpace& acc, std::span<const Splash> splashes,
                                     double tau);

}  // namespace repseg
