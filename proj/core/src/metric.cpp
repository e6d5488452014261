#include "repseg/metric.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "repseg/errors.hpp"

namespace repseg {

double PrecisionRecall::f1() const noexcept {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

LabelMask split_connected_regions(const LabelMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const auto src = mask.labels();
  const std::size_t n = src.size();
  std::vector<std::uint32_t> out(n, 0);
  std::vector<std::size_t> stack;
  std::uint32_t next = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (src[seed] == 0 || out[seed] != 0) continue;
    out[seed] = ++next;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const std::size_t nbrs[4] = {x > 0 ? i - 1 : n, x + 1 < w ? i + 1 : n,
                                   y > 0 ? i - w : n, y + 1 < h ? i + w : n};
      for (std::size_t j : nbrs) {
        if (j < n && out[j] == 0 && src[j] == src[seed]) {
          out[j] = next;
          stack.push_back(j);
        }
      }
    }
  }
  return LabelMask(w, h, std::move(out));
}

PrecisionRecall score(const LabelMask& pred_in, const LabelMask& gt, PredictionUnit unit,
                      double iou_threshold) {
  if (pred_in.width() != gt.width() || pred_in.height() != gt.height()) {
    throw DimensionMismatch("score: prediction is " + std::to_string(pred_in.width()) + "x" +
                            std::to_string(pred_in.height()) + ", ground truth is " +
                            std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  const LabelMask pred =
      unit == PredictionUnit::ConnectedRegion ? split_connected_regions(pred_in) : pred_in;

  const auto p = pred.labels();
  const auto g = gt.labels();
  std::vector<std::size_t> pred_area(pred.label_count() + 1, 0);
  std::vector<std::size_t> gt_area(gt.label_count() + 1, 0);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> overlap;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++pred_area[p[i]];
    ++gt_area[g[i]];
    if (p[i] != 0 && g[i] != 0) ++overlap[{p[i], g[i]}];
  }
  std::size_t pred_total = 0;
  std::size_t gt_total = 0;
  for (std::size_t l = 1; l < pred_area.size(); ++l) pred_total += pred_area[l];
  for (std::size_t l = 1; l < gt_area.size(); ++l) gt_total += gt_area[l];

  if (pred_total == 0) return gt_total == 0 ? PrecisionRecall{1.0, 1.0} : PrecisionRecall{};
  if (gt_total == 0) return {};

  struct Pair {
    double iou;
    std::uint32_t pred;
    std::uint32_t gt;
    std::size_t inter;
  };
  std::vector<Pair> pairs;
  for (const auto& [key, inter] : overlap) {
    const auto uni = pred_area[key.first] + gt_area[key.second] - inter;
    const double iou = static_cast<double>(inter) / static_cast<double>(uni);
    if (iou >= iou_threshold) pairs.push_back({iou, key.first, key.second, inter});
  }
  // Highest IoU first; overlap keys are already (pred, gt) ascending.
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.iou > b.iou; });

  std::vector<bool> pred_used(pred_area.size(), false);
  std::vector<bool> gt_used(gt_area.size(), false);
  std::size_t matched = 0;
  for (const auto& pr : pairs) {
    if (pred_used[pr.pred] || gt_used[pr.gt]) continue;
    pred_used[pr.pred] = true;
    gt_used[pr.gt] = true;
    matched += pr.inter;
  }
  return {static_cast<double>(matched) / static_cast<double>(pred_total),
          static_cast<double>(matched) / static_cast<double>(gt_total)};
}

}  // namespace repseg
