#include "repseg/splash.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "repseg/errors.hpp"
#include "repseg/parallel.hpp"

namespace repseg {

void SplashParams::validate() const {
  if (k < 1) throw InvalidParam("splash: k must be >= 1, got " + std::to_string(k));
  if (!(r >= 0.0)) throw InvalidParam("splash: r must be >= 0");
  if (!(d_max > 0.0)) throw InvalidParam("splash: d_max must be > 0");
}

NeighborIndex::NeighborIndex(std::span<const Descriptor> descriptors)
    : row_of_(descriptors.size(), -1) {
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    if (descriptors[i].degenerate) continue;
    row_of_[i] = static_cast<std::int32_t>(ids_.size());
    ids_.push_back(static_cast<KeypointId>(i));
    rows_.insert(rows_.end(), descriptors[i].v.begin(), descriptors[i].v.end());
  }
  if (ids_.empty()) throw EmptyInput("neighbor index: no non-degenerate descriptors");
}

bool NeighborIndex::contains(KeypointId id) const noexcept {
  return id >= 0 && static_cast<std::size_t>(id) < row_of_.size() && row_of_[id] >= 0;
}

std::vector<Neighbor> NeighborIndex::query(std::span<const Keypoint> keypoints, KeypointId center,
                                           const SplashParams& params) const {
  params.validate();
  if (!contains(center)) {
    throw InvalidParam("query: keypoint " + std::to_string(center) +
                       " is not an indexed non-degenerate keypoint");
  }
  if (keypoints.size() != row_of_.size()) {
    throw InvalidParam("query: keypoint list does not match the indexed descriptors");
  }
  const float* q = rows_.data() + static_cast<std::size_t>(row_of_[center]) * kDescriptorSize;
  const Keypoint& c = keypoints[static_cast<std::size_t>(center)];
  const double r2 = params.r * params.r;
  const float dmax2 = static_cast<float>(params.d_max) * static_cast<float>(params.d_max);
  const std::size_t k = static_cast<std::size_t>(params.k);

  struct Candidate {
    float dist2;
    KeypointId id;
  };
  std::vector<Candidate> best;  // sorted by (dist2, id)
  best.reserve(k + 1);

  for (std::size_t row = 0; row < ids_.size(); ++row) {
    const KeypointId id = ids_[row];
    if (id == center) continue;
    const Keypoint& p = keypoints[static_cast<std::size_t>(id)];
    const double ddx = p.x - c.x;
    const double ddy = p.y - c.y;
    if (ddx * ddx + ddy * ddy < r2) continue;  // too close in the image plane

    const float bound = best.size() == k ? std::min(dmax2, best.back().dist2) : dmax2;
    const float* v = rows_.data() + row * kDescriptorSize;
    float d2 = 0.0f;
    bool over = false;
    for (int j = 0; j < kDescriptorSize; j += 16) {
      for (int t = j; t < j + 16; ++t) {
        const float diff = q[t] - v[t];
        d2 += diff * diff;
      }
      if (d2 > bound) {
        over = true;
        break;
      }
    }
    if (over || d2 > dmax2) continue;
    if (best.size() == k && !(d2 < best.back().dist2)) continue;
    // Scan order is ascending id, so an equal-distance newcomer goes after
    // the incumbents.
    auto pos = std::upper_bound(best.begin(), best.end(), d2,
                                [](float value, const Candidate& e) { return value < e.dist2; });
    best.insert(pos, Candidate{d2, id});
    if (best.size() > k) best.pop_back();
  }

  std::vector<Neighbor> out;
  out.reserve(best.size());
  for (const auto& b : best) out.push_back({b.id, std::sqrt(b.dist2)});
  return out;
}

std::vector<Splash> make_splashes(std::span<const Keypoint> keypoints,
                                  std::span<const Descriptor> descriptors,
                                  const SplashParams& params, int jobs) {
  params.validate();
  if (keypoints.size() != descriptors.size()) {
    throw InvalidParam("make_splashes: keypoint and descriptor lists differ in length");
  }
  std::optional<NeighborIndex> index;
  try {
    index.emplace(descriptors);
  } catch (const EmptyInput&) {
    return {};
  }

  std::vector<std::optional<Splash>> slots(keypoints.size());
  parallel_for(keypoints.size(), jobs, [&](std::size_t i) {
    const auto id = static_cast<KeypointId>(i);
    if (!index->contains(id)) return;
    const auto neighbors = index->query(keypoints, id, params);
    if (neighbors.empty()) return;
    Splash s;
    s.center = id;
    s.vectors.reserve(neighbors.size());
    const Keypoint& c = keypoints[i];
    for (const auto& n : neighbors) {
      const Keypoint& p = keypoints[static_cast<std::size_t>(n.id)];
      s.vectors.push_back({p.x - c.x, p.y - c.y, n.id, n.distance});
    }
    slots[i] = std::move(s);
  });

  std::vector<Splash> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace repseg
