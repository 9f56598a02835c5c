#include <gtest/gtest.h>

#include "lep/stats.hpp"

using namespace lep;

TEST(Cdf, SmallSampleByHand) {
  const auto f = cdf({0.1, 0.5, 0.9});
  EXPECT_EQ(f.count(), 3u);
  EXPECT_DOUBLE_EQ(f.evaluate(0.0), 0.0);
  EXPECT_DOUBLE_EQ(f.evaluate(0.1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.evaluate(0.49), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.evaluate(0.5), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.evaluate(0.95), 1.0);
  EXPECT_DOUBLE_EQ(f.at_grid(500), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.at_grid(1000), 1.0);
  EXPECT_EQ(f.grid_values().size(), kCdfGridSize);
}

TEST(Cdf, IsMonotoneAndRightContinuous) {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(std::fmod(i * 0.6180339887, 1.0));
  const auto f = cdf(xs);
  for (std::size_t i = 1; i < kCdfGridSize; ++i) EXPECT_LE(f.at_grid(i - 1), f.at_grid(i));
}

TEST(Cdf, SupDistance) {
  const auto f = cdf({0.25, 0.75});
  const auto g = cdf({0.25, 0.75});
  const auto h = cdf({0.5, 0.75});
  EXPECT_EQ(sup_distance(f, g), 0.0);
  EXPECT_DOUBLE_EQ(sup_distance(f, h), 0.5);
  EXPECT_DOUBLE_EQ(sup_distance(h, f), 0.5);
  EXPECT_THROW(cdf({}), std::invalid_argument);
}

TEST(Cdf, FixedPointRoundTrip) {
  for (double v : {0.0, 0.25, 0.5, 0.999})
    EXPECT_NEAR(from_fixed(to_fixed(v)), v, 1e-9);
  EXPECT_EQ(to_fixed(1.5), UINT32_MAX);
  EXPECT_EQ(to_fixed(-1.0), 0u);
}

TEST(Moments, MatchTwoPassAndMerge) {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(std::sin(i * 1.3) * 10 + 1e6);
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  MomentAccumulator all, a, b;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    all.add(xs[i]);
    (i < 377 ? a : b).add(xs[i]);
  }
  a.merge(b);
  EXPECT_NEAR(all.mean(), mean, 1e-9);
  EXPECT_NEAR(all.variance(), ss / (xs.size() - 1), 1e-7);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_NEAR(a.mean(), all.mean(), 1e-9);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-7);
  const auto mw = mean_with_error(all);
  EXPECT_NEAR(mw.std_error, std::sqrt(all.variance() / 1000), 1e-12);
  MomentAccumulator one;
  one.add(1.0);
  EXPECT_THROW(mean_with_error(one), std::invalid_argument);
}
