#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "gen.hpp"
#include "oracles.hpp"
#include "repseg/errors.hpp"
#include "repseg/metric.hpp"

using namespace repseg;

namespace {

constexpr PredictionUnit kUnits[] = {PredictionUnit::ConnectedRegion, PredictionUnit::Label};

LabelMask permuted(const LabelMask& m, gen::Gen& g) {
  std::vector<std::uint32_t> perm(m.label_count() + 1);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = perm.size() - 1; i > 1; --i) {
    std::swap(perm[i], perm[static_cast<std::size_t>(g.uniform_int(1, static_cast<int>(i)))]);
  }
  std::vector<std::uint32_t> v(m.labels().begin(), m.labels().end());
  for (auto& l : v) l = perm[l];
  return LabelMask(m.width(), m.height(), std::move(v));
}

// Three 8x4 instances side by side on a 40x6 canvas.
LabelMask three_instances() {
  std::vector<std::uint32_t> v(40 * 6, 0);
  for (int k = 0; k < 3; ++k) {
    for (int y = 1; y < 5; ++y) {
      for (int x = 2 + 12 * k; x < 10 + 12 * k; ++x) v[y * 40 + x] = static_cast<std::uint32_t>(k + 1);
    }
  }
  return LabelMask(40, 6, std::move(v));
}

}  // namespace

TEST(Score, IdenticalUpToPermutation) {
  const auto gt = three_instances();
  gen::Gen g(4);
  for (auto unit : kUnits) {
    const auto pr = score(permuted(gt, g), gt, unit);
    EXPECT_DOUBLE_EQ(pr.precision, 1.0);
    EXPECT_DOUBLE_EQ(pr.recall, 1.0);
  }
}

TEST(Score, EmptyPrediction) {
  const auto gt = three_instances();
  for (auto unit : kUnits) {
    const auto pr = score(LabelMask(40, 6), gt, unit);
    EXPECT_EQ(pr.precision, 0.0);
    EXPECT_EQ(pr.recall, 0.0);
    const auto both = score(LabelMask(40, 6), LabelMask(40, 6), unit);
    EXPECT_EQ(both.precision, 1.0);
    EXPECT_EQ(both.recall, 1.0);
  }
}

TEST(Score, LeftHalvesGiveHalfRecallFullPrecision) {
  const auto gt = three_instances();
  // Each instance is 8 wide; its left half has IoU 4*4 / (8*4) = 0.5 exactly.
  std::vector<std::uint32_t> v(40 * 6, 0);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 40; ++x) {
      const auto l = gt.at(x, y);
      if (l && (x - 2) % 12 < 4) v[static_cast<std::size_t>(y) * 40 + x] = l;
    }
  }
  const LabelMask pred(40, 6, std::move(v));
  for (auto unit : kUnits) {
    const auto pr = score(pred, gt, unit);
    EXPECT_DOUBLE_EQ(pr.recall, 0.5);
    EXPECT_DOUBLE_EQ(pr.precision, 1.0);
  }
}

TEST(Score, RegionUnitsSplitOneLabelIntoInstances) {
  const auto gt = three_instances();
  std::vector<std::uint32_t> v(gt.labels().begin(), gt.labels().end());
  for (auto& l : v) l = l ? 1 : 0;  // one category label for all three
  const LabelMask pred(40, 6, std::move(v));
  const auto region = score(pred, gt, PredictionUnit::ConnectedRegion);
  EXPECT_DOUBLE_EQ(region.recall, 1.0);
  const auto label = score(pred, gt, PredictionUnit::Label);
  EXPECT_EQ(label.recall, 0.0);  // IoU 1/3 for every pair
}

TEST(Score, DimensionMismatch) {
  EXPECT_THROW(score(LabelMask(3, 3), LabelMask(3, 4)), DimensionMismatch);
}

TEST(Score, F1IsHarmonicMean) {
  EXPECT_DOUBLE_EQ((PrecisionRecall{0.5, 1.0}.f1()), 2 * 0.5 / 1.5);
  EXPECT_EQ((PrecisionRecall{0.0, 0.0}.f1()), 0.0);
}

TEST(Score, LabelUnitsMatchExhaustiveOracle) {
  gen::Gen g(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = g.uniform_int(4, 30), h = g.uniform_int(4, 30);
    const auto pred = g.rect_mask(w, h, g.uniform_int(0, 6));
    const auto gt = g.rect_mask(w, h, g.uniform_int(0, 6));
    const double t = g.coin() ? 0.5 : g.uniform(0.1, 0.9);
    const auto got = score(pred, gt, PredictionUnit::Label, t);
    const auto want = oracle::label_score(pred, gt, t);
    ASSERT_DOUBLE_EQ(got.precision, want.precision) << "trial " << trial;
    ASSERT_DOUBLE_EQ(got.recall, want.recall) << "trial " << trial;
  }
}

TEST(Score, RegionUnitsEqualLabelUnitsOnSplitMask) {
  gen::Gen g(18);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pred = g.rect_mask(24, 24, g.uniform_int(0, 6));
    const auto gt = g.rect_mask(24, 24, g.uniform_int(0, 6));
    const auto a = score(pred, gt, PredictionUnit::ConnectedRegion);
    const auto b = oracle::label_score(split_connected_regions(pred), gt);
    ASSERT_DOUBLE_EQ(a.precision, b.precision);
    ASSERT_DOUBLE_EQ(a.recall, b.recall);
  }
}

TEST(Score, PermutationInvariance) {
  gen::Gen g(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pred = g.rect_mask(32, 32, g.uniform_int(1, 7));
    const auto gt = g.rect_mask(32, 32, g.uniform_int(1, 7));
    for (auto unit : kUnits) {
      const auto base = score(pred, gt, unit);
      const auto p = score(permuted(pred, g), permuted(gt, g), unit);
      ASSERT_DOUBLE_EQ(base.precision, p.precision);
      ASSERT_DOUBLE_EQ(base.recall, p.recall);
    }
  }
}

TEST(Score, FalsePositivesNeverHelp) {
  gen::Gen g(34);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pred = g.rect_mask(32, 32, g.uniform_int(1, 5));
    const auto gt = g.rect_mask(32, 32, g.uniform_int(1, 5));
    // New label on pixels that are background in both masks.
    std::vector<std::uint32_t> v(pred.labels().begin(), pred.labels().end());
    const std::uint32_t fresh = pred.label_count() + 1;
    bool added = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0 && gt.labels()[i] == 0 && g.coin(0.3)) {
        v[i] = fresh;
        added = true;
      }
    }
    if (!added) continue;
    const LabelMask noisy(32, 32, std::move(v));
    for (auto unit : kUnits) {
      const auto before = score(pred, gt, unit);
      const auto after = score(noisy, gt, unit);
      ASSERT_LE(after.precision, before.precision + 1e-15);
      ASSERT_DOUBLE_EQ(after.recall, before.recall);
    }
  }
}

TEST(SplitRegions, NumbersRegionsInScanOrder) {
  const LabelMask m(5, 1, {1, 0, 1, 2, 2});
  const auto s = split_connected_regions(m);
  EXPECT_EQ(std::vector<std::uint32_t>(s.labels().begin(), s.labels().end()),
            (std::vector<std::uint32_t>{1, 0, 2, 3, 3}));
}
