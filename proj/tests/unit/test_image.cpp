#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "gen.hpp"
#include "repseg/errors.hpp"
#include "repseg/image.hpp"
#include "tmpdir.hpp"

using namespace repseg;

TEST(Image, RejectsBadShapes) {
  EXPECT_THROW(Image(0, 4, 1, std::uint8_t{0}), InvalidParam);
  EXPECT_THROW(Image(4, 4, 2, std::uint8_t{0}), InvalidParam);
  EXPECT_THROW(Image(2, 2, 3, std::vector<std::uint8_t>(11)), InvalidParam);
}

TEST(LabelMask, RejectsGapsAndDensifies) {
  EXPECT_THROW(LabelMask(2, 1, {0, 2}), InvalidParam);
  const auto m = LabelMask::densified(3, 1, {7, 0, 3});
  EXPECT_EQ(m.label_count(), 2u);
  EXPECT_EQ(m.at(0, 0), 2u);  // relative order kept: 3 -> 1, 7 -> 2
  EXPECT_EQ(m.at(2, 0), 1u);
}

TEST(ToGray, WhiteAndRed) {
  const Image rgb(2, 1, 3, std::vector<std::uint8_t>{255, 255, 255, 255, 0, 0});
  const Image g = to_gray(rgb);
  EXPECT_EQ(g.channels(), 1);
  EXPECT_EQ(g.at(0, 0), 255);
  EXPECT_EQ(g.at(1, 0), static_cast<int>(std::lround(0.299 * 255)));
}

TEST(ToGray, GrayPassthroughAndIdempotent) {
  gen::Gen g(7);
  const Image gray = g.image(9, 5, 1);
  EXPECT_EQ(to_gray(gray), gray);
  const Image rgb = g.image(9, 5, 3);
  EXPECT_EQ(to_gray(to_gray(rgb)), to_gray(rgb));
}

TEST(ImageIo, WhitePngRoundTrip) {
  const auto dir = fresh_dir("image_io_white");
  const Image white(4, 4, 3, std::uint8_t{255});
  write_image_png(white, dir / "white.png");
  EXPECT_EQ(load_image(dir / "white.png"), white);
}

TEST(ImageIo, GrayPngStaysOneChannel) {
  const auto dir = fresh_dir("image_io_gray");
  gen::Gen g(3);
  const Image gray = g.image(6, 3, 1);
  write_image_png(gray, dir / "g.png");
  const Image back = load_image(dir / "g.png");
  EXPECT_EQ(back.channels(), 1);
  EXPECT_EQ(back, gray);
}

TEST(ImageIo, MissingFileIsIoError) {
  EXPECT_THROW(load_image("/nonexistent/definitely/not/here.png"), IoError);
}

TEST(ImageIo, SixteenBitRejected) {
  const auto dir = fresh_dir("image_io_16");
  write_mask_png(LabelMask(3, 3), dir / "m.png");
  EXPECT_THROW(load_image(dir / "m.png"), FormatError);
}

TEST(ImageIo, GarbageIsFormatError) {
  const auto dir = fresh_dir("image_io_garbage");
  std::ofstream(dir / "x.png") << "not an image at all";
  EXPECT_THROW(load_image(dir / "x.png"), FormatError);
}

TEST(MaskIo, ThreeLabelsRoundTrip) {
  const auto dir = fresh_dir("mask_io_three");
  const LabelMask m(3, 2, {0, 1, 2, 2, 1, 0});
  write_mask_png(m, dir / "m.png");
  const LabelMask back = load_mask_png(dir / "m.png");
  EXPECT_EQ(back, m);
  std::set<std::uint32_t> values(back.labels().begin(), back.labels().end());
  EXPECT_EQ(values, (std::set<std::uint32_t>{0, 1, 2}));
}

TEST(MaskIo, UnwritableDirIsIoError) {
  const auto dir = fresh_dir("mask_io_unwritable");
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(write_mask_png(LabelMask(2, 2), dir / "file" / "sub" / "m.png"), IoError);
}

TEST(MaskIo, RandomRoundTripProperty) {
  const auto dir = fresh_dir("mask_io_property");
  gen::Gen g(11);
  for (int trial = 0; trial < 25; ++trial) {
    const LabelMask m = g.rect_mask(g.uniform_int(2, 40), g.uniform_int(2, 40), g.uniform_int(0, 9));
    write_mask_png(m, dir / "m.png");
    ASSERT_EQ(load_mask_png(dir / "m.png"), m) << "trial " << trial;
  }
}
