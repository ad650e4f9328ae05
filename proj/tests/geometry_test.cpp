#include <cmath>

#include <gtest/gtest.h>

#include "casnet/geometry.hpp"
#include "casnet/rng.hpp"

namespace casnet {
namespace {

TEST(Mix64, MatchesPublishedSplitmix64Outputs) {
  // first outputs of splitmix64 for seeds 0, 1, 0xDEADBEEF
  EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(mix64(1), 0x910A2DEC89025CC1ull);
  EXPECT_EQ(mix64(0xDEADBEEF), 0x4ADFB90F68C9EB9Bull);
}

TEST(CounterRng, DeterministicAndOrderFree) {
  const CounterRng a(42), b(42);
  EXPECT_EQ(a.bits(0), b.bits(0));
  EXPECT_EQ(a.bits(123456), b.bits(123456));
  // reading counters in any order gives the same values
  const double late = a.u01(99);
  const double early = a.u01(1);
  EXPECT_EQ(early, b.u01(1));
  EXPECT_EQ(late, b.u01(99));
}

TEST(CounterRng, SeedsStreamsAndLanesDiffer) {
  const CounterRng a(42), b(43);
  EXPECT_NE(a.bits(0), b.bits(0));
  const CounterRng s0(42, 0), s1(42, 1);
  EXPECT_NE(s0.bits(0), s1.bits(0));
  EXPECT_NE(a.split(0).bits(0), a.split(1).bits(0));
  EXPECT_NE(a.split(0).bits(0), a.bits(0));
}

TEST(CounterRng, U01RangeAndUniformIntBounds) {
  const CounterRng rng(7);
  bool lo_hit = false, hi_hit = false;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const double u = rng.u01(i);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const std::int64_t v = rng.uniform_int(i, -3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
    lo_hit |= v == -3;
    hi_hit |= v == 3;
  }
  EXPECT_TRUE(lo_hit);
  EXPECT_TRUE(hi_hit);
}

TEST(CounterRng, GaussianMomentsAreSane) {
  const CounterRng rng(11);
  const int n = 4000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian(static_cast<std::uint64_t>(i));
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.06);
  EXPECT_NEAR(var, 1.0, 0.1);
}

TEST(Box, BasicsAndIou) {
  const Box a{0, 0, 10, 10};
  EXPECT_DOUBLE_EQ(a.width(), 10.0);
  EXPECT_DOUBLE_EQ(a.height(), 10.0);
  EXPECT_DOUBLE_EQ(a.area(), 100.0);
  EXPECT_TRUE(a.valid());
  EXPECT_FALSE((Box{5, 5, 5, 5}).valid());

  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(iou(a, Box{20, 20, 30, 30}), 0.0);
  // abutting boxes share no area
  EXPECT_DOUBLE_EQ(iou(a, Box{10, 0, 20, 10}), 0.0);
  // overlap 50, union 150
  EXPECT_DOUBLE_EQ(iou(a, Box{5, 0, 15, 10}), 1.0 / 3.0);
}

TEST(Box, CenterOf) {
  const Point p = center_of(Box{0, 0, 10, 10});
  EXPECT_DOUBLE_EQ(p.x, 5.0);
  EXPECT_DOUBLE_EQ(p.y, 5.0);
  EXPECT_DOUBLE_EQ(squared_distance(p, Point{8, 9}), 25.0);
}

TEST(Box, ZeroDistanceDecodesToOwnPixel) {
  const Box b = box_from_distances(PixelCoord{4, 7}, DistanceVector{0, 0, 0, 0}, 1);
  EXPECT_DOUBLE_EQ(b.left, 7.0);
  EXPECT_DOUBLE_EQ(b.top, 4.0);
  EXPECT_DOUBLE_EQ(b.right, 8.0);
  EXPECT_DOUBLE_EQ(b.bottom, 5.0);
  EXPECT_DOUBLE_EQ(b.area(), 1.0);
}

TEST(Box, EncodeDecodeBijectionAtStrideOne) {
  const CounterRng rng(1234);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t b = static_cast<std::uint64_t>(i) * 16;
    const double left = static_cast<double>(rng.uniform_int(b, 0, 200));
    const double top = static_cast<double>(rng.uniform_int(b + 1, 0, 200));
    const double w = static_cast<double>(rng.uniform_int(b + 2, 1, 60));
    const double h = static_cast<double>(rng.uniform_int(b + 3, 1, 60));
    const Box box{left, top, left + w, top + h};
    const PixelCoord u{
        static_cast<int>(top) + static_cast<int>(rng.uniform_int(b + 4, 0, static_cast<std::int64_t>(h) - 1)),
        static_cast<int>(left) + static_cast<int>(rng.uniform_int(b + 5, 0, static_cast<std::int64_t>(w) - 1))};
    const DistanceVector d = distances_to_box(u, box, 1);
    EXPECT_GE(d.left, 0.0);
    EXPECT_GE(d.top, 0.0);
    EXPECT_GE(d.right, 0.0);
    EXPECT_GE(d.bottom, 0.0);
    const Box back = box_from_distances(u, d, 1);
    EXPECT_EQ(back.left, box.left);
    EXPECT_EQ(back.top, box.top);
    EXPECT_EQ(back.right, box.right);
    EXPECT_EQ(back.bottom, box.bottom);
  }
}

TEST(Box, StrideScalesDistances) {
  // 10x10 box anchored at its top-left pixel, encoded at stride 2
  const Box box{0, 0, 10, 10};
  const DistanceVector d = distances_to_box(PixelCoord{0, 0}, box, 2);
  EXPECT_DOUBLE_EQ(d.left, 0.0);
  EXPECT_DOUBLE_EQ(d.top, 0.0);
  EXPECT_DOUBLE_EQ(d.right, 4.5);
  EXPECT_DOUBLE_EQ(d.bottom, 4.5);
  const Box back = box_from_distances(PixelCoord{0, 0}, d, 2);
  EXPECT_EQ(back.left, 0.0);
  EXPECT_EQ(back.top, 0.0);
  EXPECT_EQ(back.right, 10.0);
  EXPECT_EQ(back.bottom, 10.0);
}

}  // namespace
}  // namespace casnet
