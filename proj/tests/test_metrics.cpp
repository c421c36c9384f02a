#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "edgesim/metrics.hpp"

using namespace edgesim;

TEST(Aggregate, Empty) {
  const auto m = aggregate({});
  EXPECT_TRUE(m.empty());
  EXPECT_EQ(m.success_rate, 0.0);
  EXPECT_FALSE(m.delay_hops);
}

TEST(Aggregate, SuccessAndFailure) {
  const std::vector<EpochRecord> r = {{0, true, 3, 10, 2}, {1, false, std::nullopt, 4, 1}};
  const auto m = aggregate(r);
  EXPECT_EQ(m.success_rate, 0.5);
  ASSERT_TRUE(m.delay_hops);
  EXPECT_EQ(m.delay_hops->mean, 3.0);
  EXPECT_EQ(m.delay_hops->stddev, 0.0);
  EXPECT_EQ(m.deliveries.mean, 7.0);  // failures count too
  EXPECT_NEAR(m.deliveries.stddev, std::sqrt(18.0), 1e-12);
}

TEST(Aggregate, IdenticalSuccesses) {
  std::vector<EpochRecord> r;
  for (int i = 0; i < 100; ++i) r.push_back({i, true, 4, 10, 5});
  const auto m = aggregate(r);
  EXPECT_EQ(m.success_rate, 1.0);
  EXPECT_EQ(m.delay_hops->mean, 4.0);
  EXPECT_EQ(m.deliveries.mean, 10.0);
  EXPECT_EQ(m.deliveries.stddev, 0.0);
  EXPECT_EQ(m.emissions.mean, 5.0);
}

TEST(Aggregate, AllFailuresHaveNoDelay) {
  const std::vector<EpochRecord> r = {{0, false, std::nullopt, 1, 1}};
  const auto m = aggregate(r);
  EXPECT_EQ(m.success_rate, 0.0);
  EXPECT_FALSE(m.delay_hops);
}

TEST(Aggregate, PermutationInvariant) {
  std::mt19937 gen(5);
  std::vector<EpochRecord> r;
  for (int i = 0; i < 500; ++i) {
    const bool ok = gen() % 10 != 0;
    r.push_back({i, ok, ok ? std::optional<std::int32_t>(1 + gen() % 20) : std::nullopt,
                 static_cast<std::int64_t>(gen() % 1000000), static_cast<std::int64_t>(gen() % 10000)});
  }
  const auto ref = aggregate(r);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(r.begin(), r.end(), gen);
    EXPECT_EQ(aggregate(r), ref);
  }
}

TEST(MeanStd, SampleStddev) {
  const std::vector<double> v = {1, 2, 3, 4};
  const auto ms = mean_std(v);
  EXPECT_DOUBLE_EQ(ms.mean, 2.5);
  EXPECT_NEAR(ms.stddev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_EQ(mean_std(std::vector<double>{7}).stddev, 0.0);
}
