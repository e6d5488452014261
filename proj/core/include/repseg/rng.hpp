#pragma once

#include <cstdint>

namespace repseg {

/// Counter-based generator: draw i is splitmix64(seed + (i+1) * golden).
/// The stream depends only on (seed, draw index), never on the platform or
/// standard-library implementation, so corruption outputs are reproducible
/// bit for bit everywhere.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Standard normal via Box-Muller; consumes two draws per pair.
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace repseg
