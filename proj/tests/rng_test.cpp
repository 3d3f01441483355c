#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ntarp/parallel.hpp"
#include "ntarp/rng.hpp"
#include "ntarp/stats.hpp"

using namespace ntarp;

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a(1, 5), b(1, 5), c(1, 6), d(2, 5);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
}

TEST(Rng, UniformAndBelow) {
  Rng rng(3);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 4 * std::sqrt(1.0 / 12 / 100000));
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(Rng, NormalMoments) {
  Rng rng(4);
  std::vector<double> xs(200000);
  for (auto& x : xs) x = rng.normal();
  EXPECT_NEAR(mean(xs), 0.0, 4 / std::sqrt(200000.0));
  EXPECT_NEAR(population_variance(xs), 1.0, 0.015);
  EXPECT_LT(ks_distance_to_normal(xs), 0.005);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (unsigned workers : {1u, 2u, 5u}) {
    std::vector<int> hits(1003, 0);
    parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 57) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
