#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gen.hpp"
#include "repseg/accumulator.hpp"
#include "repseg/config.hpp"
#include "repseg/errors.hpp"
#include "repseg/pipeline.hpp"
#include "repseg/synth.hpp"

using namespace repseg;

namespace {

Splash splash_of(KeypointId center, std::vector<std::pair<int, int>> vs) {
  Splash s;
  s.center = center;
  for (auto [dx, dy] : vs) s.vectors.push_back({dx, dy, 0, 0.1f});
  return s;
}

// 5x5 lattice with period 64; each node links to its lattice 4-neighbors.
// One extra splash with an unrelated displacement is appended last.
std::vector<Splash> lattice_with_outlier() {
  std::vector<Splash> out;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      std::vector<std::pair<int, int>> vs;
      if (j > 0) vs.emplace_back(-64, 0);
      if (j < 4) vs.emplace_back(64, 0);
      if (i > 0) vs.emplace_back(0, -64);
      if (i < 4) vs.emplace_back(0, 64);
      out.push_back(splash_of(i * 5 + j, vs));
    }
  }
  out.push_back(splash_of(25, {{37, -101}}));
  return out;
}

bool within_bin(const AccumulatorPeak& p, int tx, int ty, int bin) {
  return std::abs(p.dx - tx) <= bin && std::abs(p.dy - ty) <= bin;
}

}  // namespace

TEST(Accumulator, GeometryAndCellMapping) {
  const AccumulatorSpace acc(2, 31, 3.0);
  EXPECT_EQ(acc.radius_cells(), 16);
  EXPECT_EQ(acc.side(), 2 * 16 + 1);
  const auto center = acc.cell_of(0, 0);
  EXPECT_EQ(center.row, 16);
  EXPECT_EQ(center.col, 16);
  const auto far = acc.cell_of(1000, -1000);
  EXPECT_EQ(far.col, acc.side() - 1);
  EXPECT_EQ(far.row, 0);
}

TEST(Accumulator, SingleVoteUnitMass) {
  const std::vector<Splash> s = {splash_of(0, {{30, 0}})};
  const auto acc = vote(s, {0.5, 1, 64});
  EXPECT_NEAR(acc.total_mass(), 1.0, 1e-6);
  const auto peaks = acc.peaks(10, 0.0);
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_EQ(peaks[0].dx, 30);
  EXPECT_EQ(peaks[0].dy, 0);
  EXPECT_EQ(acc.value_at(30, 0), acc.max_value());
}

TEST(Accumulator, TwoVotesAdd) {
  const std::vector<Splash> one = {splash_of(0, {{30, 0}})};
  const std::vector<Splash> two = {splash_of(0, {{30, 0}}), splash_of(1, {{30, 0}})};
  const auto a1 = vote(one, {0.5, 1, 64});
  const auto a2 = vote(two, {0.5, 1, 64});
  EXPECT_NEAR(a2.total_mass(), 2.0, 1e-6);
  EXPECT_NEAR(a2.value_at(30, 0), 2 * a1.value_at(30, 0), 1e-12);
  EXPECT_EQ(a2.vote_count(), 2u);
}

TEST(Accumulator, BoundaryVotesClampWithoutLosingMass) {
  const std::vector<Splash> s = {splash_of(0, {{500, 500}, {-64, 3}, {0, -900}})};
  const auto acc = vote(s, {3.0, 2, 64});
  EXPECT_NEAR(acc.total_mass(), 3.0, 1e-6 * 3);
  EXPECT_GT(acc.at(acc.side() - 1, acc.side() - 1), 0.0);
}

TEST(Accumulator, RejectsBadParams) {
  EXPECT_THROW((AccumulatorParams{0.0, 2, 0}.validate()), InvalidParam);
  EXPECT_THROW((AccumulatorParams{1.0, 0, 0}.validate()), InvalidParam);
  EXPECT_THROW(AccumulatorSpace(2, 10, -1.0), InvalidParam);
  const std::vector<Splash> s = {splash_of(0, {{1, 1}})};
  EXPECT_THROW(vote(s, {3.0, 2, 0}), InvalidParam);  // half_extent unresolved
}

TEST(Accumulator, MirroredVotesGiveReflectedGrid) {
  gen::Gen g(17);
  const auto s = g.splashes(40, 6, 70);
  auto mirrored = s;
  for (auto& sp : mirrored) {
    for (auto& v : sp.vectors) {
      v.dx = -v.dx;
      v.dy = -v.dy;
    }
  }
  const auto a = vote(s, {3.0, 2, 64});
  const auto b = vote(mirrored, {3.0, 2, 64});
  const int n = a.side();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) ASSERT_NEAR(a.at(r, c), b.at(n - 1 - r, n - 1 - c), 1e-12);
  }
}

TEST(Accumulator, ParallelVoteMatchesSequential) {
  gen::Gen g(3);
  const auto s = g.splashes(200, 8, 120);
  const auto seq = vote(s, {3.0, 2, 100}, 1);
  const auto par = vote(s, {3.0, 2, 100}, 6);
  ASSERT_EQ(seq.grid().size(), par.grid().size());
  for (std::size_t i = 0; i < seq.grid().size(); ++i) ASSERT_NEAR(seq.grid()[i], par.grid()[i], 1e-9);
  EXPECT_EQ(seq.vote_count(), par.vote_count());
  // Sequential path is bitwise reproducible.
  const auto again = vote(s, {3.0, 2, 100}, 1);
  EXPECT_TRUE(std::equal(seq.grid().begin(), seq.grid().end(), again.grid().begin()));
}

TEST(Accumulator, MassConservationRandom) {
  gen::Gen g(29);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = g.splashes(static_cast<std::size_t>(g.uniform_int(1, 80)), 10, 300);
    const AccumulatorParams p{g.uniform(0.3, 8.0), g.uniform_int(1, 4), g.uniform_int(8, 200)};
    const auto acc = vote(s, p);
    const double n = static_cast<double>(acc.vote_count());
    ASSERT_NEAR(acc.total_mass(), n, 1e-6 * n);
  }
}

TEST(Score, SplashOnGlobalMaxScoresOne) {
  const std::vector<Splash> s = {splash_of(0, {{30, 0}}), splash_of(1, {{30, 0}}),
                                 splash_of(2, {{-12, 40}})};
  const auto acc = vote(s, {2.0, 2, 64});
  EXPECT_DOUBLE_EQ(score_splash(acc, s[0]), 1.0);
  EXPECT_LT(score_splash(acc, s[2]), 1.0);
  EXPECT_EQ(score_splash(acc, Splash{}), 0.0);
}

TEST(Score, OutlierBelowEveryLatticeSplash) {
  const auto s = lattice_with_outlier();
  const auto acc = vote(s, {3.0, 2, 128});
  const double outlier = score_splash(acc, s.back());
  for (std::size_t i = 0; i + 1 < s.size(); ++i) EXPECT_LT(outlier, score_splash(acc, s[i]));
}

TEST(Hotspots, ThresholdExtremes) {
  const auto s = lattice_with_outlier();
  const auto acc = vote(s, {3.0, 2, 128});
  EXPECT_EQ(select_hotspots(acc, s, 0.0).size(), s.size());
  EXPECT_TRUE(select_hotspots(acc, s, 1.0000001).empty());
}

TEST(Hotspots, LatticeSelectedOutlierRejected) {
  const auto s = lattice_with_outlier();
  const auto acc = vote(s, {3.0, 2, 128});
  const auto hot = select_hotspots(acc, s, 0.5);
  std::set<SplashId> ids;
  for (const auto& h : hot) ids.insert(h.splash);
  EXPECT_EQ(ids.size(), 25u);
  EXPECT_FALSE(ids.count(25));
  for (std::size_t i = 1; i < hot.size(); ++i) {
    ASSERT_TRUE(hot[i - 1].score > hot[i].score ||
                (hot[i - 1].score == hot[i].score && hot[i - 1].splash < hot[i].splash));
  }
}

TEST(Hotspots, NestedInTau) {
  gen::Gen g(61);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = g.splashes(60, 5, 40);
    const auto acc = vote(s, {2.0, 2, 64});
    std::set<SplashId> prev;
    bool first = true;
    for (double tau = 0.0; tau <= 1.0; tau += 0.05) {
      std::set<SplashId> cur;
      for (const auto& h : select_hotspots(acc, s, tau)) {
        ASSERT_GE(h.score, tau);
        cur.insert(h.splash);
      }
      if (!first) ASSERT_TRUE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
      prev = std::move(cur);
      first = false;
    }
  }
}

TEST(Accumulator, SyntheticTilingFourStrongestPeaksAreThePeriod) {
  SynthSpec spec;
  spec.seed = 3;
  const auto [img, truth] = synth(spec);
  const auto cfg = PipelineConfig::defaults();
  const auto res = run_pipeline(img, cfg, cfg.level("instance"));
  const auto peaks = res.accumulator.peaks(4, cfg.bin);
  ASSERT_EQ(peaks.size(), 4u);
  const std::pair<int, int> targets[4] = {{64, 0}, {-64, 0}, {0, 64}, {0, -64}};
  for (auto [tx, ty] : targets) {
    bool hit = false;
    for (const auto& p : peaks) hit = hit || within_bin(p, tx, ty, cfg.bin);
    EXPECT_TRUE(hit) << "no peak near (" << tx << "," << ty << ")";
  }
}
