#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "gen.hpp"
#include "oracles.hpp"
#include "repseg/errors.hpp"
#include "repseg/features.hpp"

using namespace repseg;

namespace {

Image shifted(const Image& img, int delta) {
  std::vector<std::uint8_t> d(img.data().begin(), img.data().end());
  for (auto& v : d) v = static_cast<std::uint8_t>(v + delta);
  return Image(img.width(), img.height(), img.channels(), std::move(d));
}

Image vertical_step(int w, int h, int step_x) {
  std::vector<std::uint8_t> d(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) d[static_cast<std::size_t>(y) * w + x] = x < step_x ? 0 : 255;
  }
  return Image(w, h, 1, std::move(d));
}

EdgeMap edge_row(int w, int h, int y, int x0, int len) {
  EdgeMap e{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};
  for (int x = x0; x < x0 + len; ++x) e.edges[static_cast<std::size_t>(y) * w + x] = 1;
  return e;
}

double l2(const Descriptor& a, const Descriptor& b) {
  double s = 0;
  for (int i = 0; i < kDescriptorSize; ++i) s += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
  return std::sqrt(s);
}

}  // namespace

TEST(Canny, ConstantImageHasNoEdges) {
  EXPECT_EQ(canny(Image(40, 30, 1, std::uint8_t{128})).count(), 0u);
}

TEST(Canny, VerticalStepIsOneLineAtSobelMaximum) {
  const Image img = vertical_step(64, 32, 32);
  const EdgeMap e = canny(img);
  const auto mag = oracle::sobel_magnitude(img);
  for (int y = 0; y < img.height(); ++y) {
    const int col = oracle::argmax_column(mag, img.width(), y);
    int on_row = 0;
    for (int x = 0; x < img.width(); ++x) {
      if (!e.at(x, y)) continue;
      ++on_row;
      EXPECT_LE(std::abs(x - col), 1) << "row " << y;
    }
    EXPECT_EQ(on_row, 1) << "row " << y;
  }
}

TEST(Canny, CheckerboardEdgesHugBoundaries) {
  const int n = 64, sq = 32;
  std::vector<std::uint8_t> d(n * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) d[y * n + x] = ((x / sq + y / sq) % 2) ? 255 : 0;
  }
  const Image img(n, n, 1, std::move(d));
  // Boundary pixels: some 4-neighbor has a different value.
  std::vector<std::pair<int, int>> boundary;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const int v = img.at(x, y);
      if ((x > 0 && img.at(x - 1, y) != v) || (x + 1 < n && img.at(x + 1, y) != v) ||
          (y > 0 && img.at(x, y - 1) != v) || (y + 1 < n && img.at(x, y + 1) != v)) {
        boundary.emplace_back(x, y);
      }
    }
  }
  const EdgeMap e = canny(img);
  ASSERT_GT(e.count(), 0u);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      if (!e.at(x, y)) continue;
      int best = n;
      for (auto [bx, by] : boundary) best = std::min(best, std::max(std::abs(bx - x), std::abs(by - y)));
      EXPECT_LE(best, 1) << "edge at " << x << "," << y;
    }
  }
}

TEST(Canny, InvariantToBrightnessShift) {
  gen::Gen g(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Image img = g.blocky_gray(g.uniform_int(16, 80), g.uniform_int(16, 80),
                                    g.uniform_int(4, 12), 0, 200);
    const int delta = g.uniform_int(1, 55);
    ASSERT_EQ(canny(img).edges, canny(shifted(img, delta)).edges) << "trial " << trial;
  }
}

TEST(Canny, RejectsBadParams) {
  const Image gray(8, 8, 1, std::uint8_t{0});
  EXPECT_THROW(canny(gray, {200, 100, 1.4}), InvalidParam);
  EXPECT_THROW(canny(gray, {-1, 100, 1.4}), InvalidParam);
  EXPECT_THROW(canny(gray, {50, 150, 0.0}), InvalidParam);
  EXPECT_THROW(canny(Image(8, 8, 3, std::uint8_t{0})), InvalidParam);
}

TEST(SampleKeypoints, EmptyMap) {
  EdgeMap e{10, 10, std::vector<std::uint8_t>(100, 0)};
  EXPECT_TRUE(sample_keypoints(e, 4, 100).empty());
}

TEST(SampleKeypoints, HorizontalRowCount) {
  const EdgeMap e = edge_row(120, 5, 2, 10, 100);
  EXPECT_EQ(sample_keypoints(e, 10, 1000).size(), oracle::greedy_count_on_line(100, 10));
  EXPECT_EQ(oracle::greedy_count_on_line(100, 10), 10u);
}

TEST(SampleKeypoints, TruncationKeepsScanOrder) {
  const EdgeMap e = edge_row(120, 5, 2, 0, 100);
  const auto all = sample_keypoints(e, 10, 1000);
  ASSERT_EQ(all.size(), 10u);
  const auto first5 = sample_keypoints(e, 10, 5);
  ASSERT_EQ(first5.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(first5[i], all[i]);
}

TEST(SampleKeypoints, GreedyInvariantsOnRandomMaps) {
  gen::Gen g(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = g.uniform_int(5, 60), h = g.uniform_int(5, 60), stride = g.uniform_int(1, 7);
    EdgeMap e{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
    const double density = g.uniform(0.02, 0.5);
    for (auto& v : e.edges) v = g.coin(density) ? 1 : 0;
    const auto kps = sample_keypoints(e, stride, 1u << 20);
    for (std::size_t i = 0; i < kps.size(); ++i) {
      ASSERT_EQ(kps[i].id, static_cast<KeypointId>(i));
      ASSERT_TRUE(e.at(kps[i].x, kps[i].y));
      for (std::size_t j = 0; j < i; ++j) {
        ASSERT_GE(std::max(std::abs(kps[i].x - kps[j].x), std::abs(kps[i].y - kps[j].y)), stride);
      }
    }
    // Maximal: every edge pixel is covered by some keypoint.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!e.at(x, y)) continue;
        bool covered = false;
        for (const auto& k : kps) {
          covered = covered || std::max(std::abs(k.x - x), std::abs(k.y - y)) < stride;
        }
        ASSERT_TRUE(covered);
      }
    }
  }
}

TEST(Describe, IdenticalPatchesGiveZeroDistance) {
  gen::Gen g(8);
  const Image tex = g.image(20, 20, 1);
  std::vector<std::uint8_t> d(100 * 40, 0);
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) {
      d[(y + 10) * 100 + x + 10] = tex.at(x, y);
      d[(y + 10) * 100 + x + 60] = tex.at(x, y);
    }
  }
  const Image img(100, 40, 1, std::move(d));
  const auto a = describe(img, {20, 20, 0});
  const auto b = describe(img, {70, 20, 1});
  ASSERT_FALSE(a.degenerate);
  EXPECT_EQ(l2(a, b), 0.0);
}

TEST(Describe, ConstantPatchIsDegenerate) {
  const auto d = describe(Image(32, 32, 1, std::uint8_t{90}), {16, 16, 0});
  EXPECT_TRUE(d.degenerate);
  for (float v : d.v) EXPECT_EQ(v, 0.0f);
}

TEST(Describe, BrightnessShiftInvariant) {
  gen::Gen g(13);
  const Image img = g.image(32, 32, 1, 0, 200);
  const Image up = shifted(img, 50);
  // Central differences agree pixel for pixel, so the histograms must too.
  for (int y = 1; y < 31; ++y) {
    for (int x = 1; x < 31; ++x) {
      ASSERT_EQ(img.at(x + 1, y) - img.at(x - 1, y), up.at(x + 1, y) - up.at(x - 1, y));
      ASSERT_EQ(img.at(x, y + 1) - img.at(x, y - 1), up.at(x, y + 1) - up.at(x, y - 1));
    }
  }
  const auto a = describe(img, {16, 16, 0});
  const auto b = describe(up, {16, 16, 0});
  EXPECT_EQ(a.v, b.v);
}

TEST(Describe, UnitNormAndBorderSafe) {
  gen::Gen g(21);
  const Image img = g.image(24, 18, 1);
  for (int y = 0; y < 18; y += 3) {
    for (int x = 0; x < 24; x += 5) {
      const auto d = describe(img, {x, y, 0}, 16);
      ASSERT_FALSE(d.degenerate);
      double n = 0;
      for (float v : d.v) n += static_cast<double>(v) * v;
      ASSERT_NEAR(std::sqrt(n), 1.0, 1e-6);
    }
  }
}

TEST(Describe, RejectsBadPatch) {
  const Image img(16, 16, 1, std::uint8_t{0});
  EXPECT_THROW(describe(img, {8, 8, 0}, 7), InvalidParam);
  EXPECT_THROW(describe(img, {8, 8, 0}, 6), InvalidParam);
}

TEST(Describe, DescribeAllMatchesAcrossJobs) {
  gen::Gen g(2);
  const Image img = g.blocky_gray(96, 96, 8, 0, 255);
  const auto kps = sample_keypoints(canny(img), 4, 5000);
  ASSERT_GT(kps.size(), 10u);
  const auto one = describe_all(img, kps, 16, 1);
  const auto many = describe_all(img, kps, 16, 7);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    ASSERT_EQ(one[i].v, many[i].v);
    ASSERT_EQ(one[i].v, describe(img, kps[i], 16).v);
  }
}
