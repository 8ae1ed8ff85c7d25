#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "fixtures.hpp"
#include "vrestore/error.hpp"
#include "vrestore/media/clip_io.hpp"
#include "vrestore/media/color.hpp"
#include "vrestore/media/filter.hpp"
#include "vrestore/media/resample.hpp"

using namespace vrestore;

TEST(Frame, SetClampsIntoUnitRange) {
  Frame f(4, 3);
  f.set(1, 1, 0, 1.7f);
  f.set(2, 1, 2, -0.3f);
  EXPECT_EQ(f(1, 1, 0), 1.f);
  EXPECT_EQ(f(2, 1, 2), 0.f);
}

TEST(Frame, RejectsBadGeometry) {
  EXPECT_THROW(Frame(0, 3), InvalidArgument);
  EXPECT_THROW(Frame(2, 2, std::vector<float>(5)), InvalidArgument);
}

TEST(Frame, LumaIsRec601) {
  Frame f(1, 1);
  f.set(0, 0, 0, 1.f);
  EXPECT_NEAR(f.luma()(0, 0), 0.299f, 1e-6);
}

TEST(Clip, RequiresUniformNonEmptyFrames) {
  EXPECT_THROW(Clip("x", 30.0, {}), InvalidArgument);
  EXPECT_THROW(Clip("x", 30.0, {Frame(2, 2), Frame(3, 2)}), InvalidArgument);
  EXPECT_THROW(Clip("x", 0.0, {Frame(2, 2)}), InvalidArgument);
}

TEST(Clip, SampleIndicesSpreadEvenly) {
  const auto idx = sample_indices(10, 4);
  ASSERT_EQ(idx.size(), 4u);
  EXPECT_EQ(idx.front(), 0u);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
  EXPECT_LT(idx.back(), 10u);
  EXPECT_EQ(sample_indices(3, 16).size(), 3u);
  EXPECT_TRUE(sample_indices(0, 4).empty());
}

TEST(Filter, KernelsAreNormalized) {
  EXPECT_NEAR(gaussian_kernel(1.5).sum(), 1.0, 1e-5);
  EXPECT_NEAR(disc_kernel(3.0).sum(), 1.0, 1e-5);
}

TEST(Filter, IdentityKernelLeavesFrame) {
  const Frame f = test::random_frame(9, 7, 1);
  EXPECT_EQ(convolve2d(f, Kernel()), f);
}

TEST(Filter, BlurPreservesConstant) {
  const Frame f = test::constant_frame(12, 9, 0.4f);
  const Frame g = gaussian_blur(f, 2.0);
  for (float v : g.data()) EXPECT_NEAR(v, 0.4f, 1e-5);
}

TEST(Filter, MinFilterMatchesBruteForce) {
  const Plane p = test::random_frame(11, 8, 2).channel(0);
  const Plane m = min_filter(p, 2);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      float lo = 1.f;
      for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) lo = std::min(lo, p.clamped(x + dx, y + dy));
      EXPECT_EQ(m(x, y), lo);
    }
}

TEST(Resample, CubicWeightInterpolates) {
  EXPECT_DOUBLE_EQ(cubic_weight(0.0), 1.0);
  EXPECT_DOUBLE_EQ(cubic_weight(1.0), 0.0);
  EXPECT_DOUBLE_EQ(cubic_weight(2.0), 0.0);
  // Partition of unity at any phase.
  for (double t : {0.1, 0.37, 0.5, 0.9})
    EXPECT_NEAR(cubic_weight(t + 1) + cubic_weight(t) + cubic_weight(1 - t) + cubic_weight(2 - t), 1.0, 1e-12);
}

TEST(Resample, SameSizeIsIdentity) {
  const Frame f = test::random_frame(10, 6, 3);
  const Frame g = resample_bicubic(f, 10, 6);
  for (std::size_t i = 0; i < f.data().size(); ++i) EXPECT_NEAR(g.data()[i], f.data()[i], 1e-5);
}

TEST(Resample, ConstantSurvivesScaling) {
  const Frame f = test::constant_frame(30, 20, 0.25f);
  for (auto [w, h] : {std::pair{10, 7}, std::pair{61, 45}}) {
    const Frame g = resample_bicubic(f, w, h);
    EXPECT_EQ(g.width(), w);
    for (float v : g.data()) EXPECT_NEAR(v, 0.25f, 1e-5);
  }
}

TEST(Color, HsvRoundTrip) {
  const Frame f = test::random_frame(16, 16, 4);
  const Frame g = hsv_to_rgb(rgb_to_hsv(f));
  for (std::size_t i = 0; i < f.data().size(); ++i) EXPECT_NEAR(g.data()[i], f.data()[i], 1e-5);
}

TEST(ClipIo, RoundTripIsEightBitQuantization) {
  const Clip c = test::scene(40, 24, 3);
  const auto dir = test::temp_dir("clipio");
  save_clip(c, dir / "c");
  const Clip back = load_clip(dir / "c");
  EXPECT_EQ(back, quantize8(c));
  EXPECT_EQ(back.id(), c.id());
  EXPECT_DOUBLE_EQ(back.fps(), c.fps());
}

TEST(ClipIo, ErrorsCarryCodes) {
  const auto dir = test::temp_dir("clipio-err");
  try {
    load_clip(dir / "missing");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.code(), IoError::Code::MissingManifest);
  }
  save_clip(test::scene(16, 16, 2), dir / "c");
  {
    std::ofstream trunc(dir / "c" / "000001.ppm", std::ios::binary);
    trunc << "P6\n16 16\n255\n";
  }
  try {
    load_clip(dir / "c");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.code(), IoError::Code::CorruptFrame);
  }
}

TEST(Scene, DeterministicPerSeed) {
  EXPECT_EQ(test::scene(48, 32, 3, 7), test::scene(48, 32, 3, 7));
  EXPECT_NE(test::scene(48, 32, 3, 7), test::scene(48, 32, 3, 8));
}
