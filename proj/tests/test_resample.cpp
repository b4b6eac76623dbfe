#include <gtest/gtest.h>

#include "rivid/core/rng.hpp"
#include "rivid/image/resample.hpp"
#include "test_utils.hpp"

using namespace rivid;

TEST(ResolutionOf, WorkedExamples) {
  EXPECT_DOUBLE_EQ(resolution_of(48, 96), 0.5);
  EXPECT_DOUBLE_EQ(resolution_of(24, 96), 0.25);
  EXPECT_DOUBLE_EQ(resolution_of(96, 96), 1.0);
}

TEST(ResolutionOf, RejectsBadInputs) {
  EXPECT_THROW(resolution_of(97, 96), std::invalid_argument);
  EXPECT_THROW(resolution_of(0, 96), std::invalid_argument);
  EXPECT_THROW(resolution_of(48, 0), std::invalid_argument);
}

TEST(Downsample, HalvesTheWorkedExampleSize) {
  ImageTensor img(128, 48);
  ImageTensor out = downsample(img, 0.5);
  EXPECT_EQ(out.height, 64);
  EXPECT_EQ(out.width, 24);
}

TEST(Downsample, RatioOneIsBitwiseCopy) {
  Rng rng(1);
  ImageTensor img = rivid::test::random_image(32, 16, rng);
  ImageTensor out = downsample(img, 1.0);
  EXPECT_EQ(out.data, img.data);
}

TEST(Downsample, ConstantsPreserved) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = rng.uniform();
    ImageTensor img(40, 20);
    std::fill(img.data.begin(), img.data.end(), c);
    const double ratio = rng.uniform(0.21, 1.0);
    ImageTensor out = downsample(img, ratio);
    for (double v : out.data) ASSERT_NEAR(v, c, 1e-9);
  }
}

TEST(Downsample, RejectsBadRatios) {
  ImageTensor img(16, 8);
  EXPECT_THROW(downsample(img, 0.0), std::invalid_argument);
  EXPECT_THROW(downsample(img, 1.5), std::invalid_argument);
  EXPECT_THROW(downsample(img, 0.1), std::invalid_argument);  // width would drop below 4
}

TEST(Downsample, WidthRatioTracksRequestedRatio) {
  Rng rng(4);
  const int width_max = 96;
  for (int trial = 0; trial < 30; ++trial) {
    int w = static_cast<int>(rng.uniform_int(24, 97));
    ImageTensor img(2 * w, w);
    double rho = rng.uniform(0.3, 1.0);
    ImageTensor out = downsample(img, rho);
    double before = resolution_of(img.width, width_max);
    double after = resolution_of(out.width, width_max);
    // equal up to integer rounding of the output width
    EXPECT_NEAR(after, rho * before, 0.5 / width_max + 1e-12);
  }
}

TEST(UpsampleTo, SameSizeIsIdentity) {
  Rng rng(5);
  ImageTensor img = rivid::test::random_image(16, 8, rng);
  ImageTensor out = upsample_to(img, 16, 8);
  EXPECT_EQ(out.data, img.data);
}

TEST(UpsampleTo, ConstantsPreserved) {
  ImageTensor img(8, 4);
  std::fill(img.data.begin(), img.data.end(), 0.373);
  ImageTensor out = upsample_to(img, 23, 11);
  for (double v : out.data) ASSERT_NEAR(v, 0.373, 1e-9);
}

TEST(UpsampleTo, CheckerboardCornersExact) {
  // 2x2 checkerboard {0,1} enlarged to 4x4: corner samples map to corner
  // samples, so corners keep their exact values; the (1,1) interior sample
  // sits at source position (1/3, 1/3) giving 4/9.
  ImageTensor img(2, 2);
  for (int ch = 0; ch < 3; ++ch) {
    img.at(ch, 0, 0) = 0.0;
    img.at(ch, 0, 1) = 1.0;
    img.at(ch, 1, 0) = 1.0;
    img.at(ch, 1, 1) = 0.0;
  }
  ImageTensor out = upsample_to(img, 4, 4);
  EXPECT_EQ(out.at(0, 0, 0), 0.0);
  EXPECT_EQ(out.at(0, 0, 3), 1.0);
  EXPECT_EQ(out.at(0, 3, 0), 1.0);
  EXPECT_EQ(out.at(0, 3, 3), 0.0);
  EXPECT_NEAR(out.at(0, 1, 1), 4.0 / 9.0, 1e-12);
}

TEST(UpsampleTo, RejectsShrinking) {
  ImageTensor img(16, 8);
  EXPECT_THROW(upsample_to(img, 8, 8), std::invalid_argument);
  EXPECT_THROW(upsample_to(img, 16, 4), std::invalid_argument);
}

TEST(Resample, DownThenUpStaysInRange) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    ImageTensor img = rivid::test::random_image(32, 16, rng);
    double ratio = rng.uniform(0.3, 1.0);
    ImageTensor down = downsample(img, ratio);
    ImageTensor up = upsample_to(down, 32, 16);
    for (double v : up.data) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(ResizeTo, MixedAxesWork) {
  Rng rng(7);
  ImageTensor img = rivid::test::random_image(16, 8, rng);
  ImageTensor out = resize_to(img, 8, 16);  // shrink rows, grow cols
  EXPECT_EQ(out.height, 8);
  EXPECT_EQ(out.width, 16);
  ImageTensor same = resize_to(img, 16, 8);
  EXPECT_EQ(same.data, img.data);
}
