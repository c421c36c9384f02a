#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "edgesim/placement.hpp"

using namespace edgesim;

TEST(OptimizedPositions, Examples) {
  EXPECT_EQ(optimized_positions(1, 1000), (std::vector<Position>{{500, 500}}));
  EXPECT_EQ(optimized_positions(4, 1000),
            (std::vector<Position>{{250, 250}, {750, 250}, {250, 750}, {750, 750}}));
  const auto nine = optimized_positions(9, 1000);
  ASSERT_EQ(nine.size(), 9u);
  std::set<std::int32_t> xs, ys;
  for (const auto& p : nine) {
    xs.insert(p.x);
    ys.insert(p.y);
  }
  EXPECT_EQ(xs, (std::set<std::int32_t>{166, 500, 833}));
  EXPECT_EQ(ys, xs);
  EXPECT_THROW(optimized_positions(8, 1000), ConfigError);
  EXPECT_THROW(optimized_positions(16, 3), ConfigError);
}

TEST(OptimizedPositions, SymmetricUpToFloor) {
  for (std::int32_t k : {1, 4, 9, 16, 25}) {
    const auto pos = optimized_positions(k, 1000);
    std::set<std::pair<std::int32_t, std::int32_t>> cells;
    for (const auto& p : pos) cells.emplace(p.x, p.y);
    for (const auto& p : pos) {
      EXPECT_TRUE(cells.count({p.y, p.x}));  // diagonal reflection and 90 degree rotation
      bool mirrored = false;
      for (const auto& q : pos) mirrored |= q.y == p.y && std::abs(q.x - (999 - p.x)) <= 1;
      EXPECT_TRUE(mirrored);
    }
  }
}

TEST(RandomPositions, LegalDistinctDeterministic) {
  Rng a(5), b(5);
  const auto p = random_positions(5, 1000, a);
  EXPECT_EQ(p, random_positions(5, 1000, b));
  Rng one(1);
  const auto single = random_positions(1, 1000, one);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_TRUE(in_grid(single[0], 1000));
  Rng tiny(2);
  const auto all = random_positions(4, 2, tiny);
  std::set<std::pair<int, int>> distinct;
  for (const auto& q : all) distinct.emplace(q.x, q.y);
  EXPECT_EQ(distinct.size(), 4u);
}

TEST(RandomPositions, CoordinateMeansNearCentre) {
  Rng rng(3);
  double sx = 0, sy = 0;
  for (int i = 0; i < 10000; ++i) {
    const Position p = random_positions(1, 1000, rng)[0];
    sx += p.x;
    sy += p.y;
  }
  // sd of a uniform coordinate ~ 288.7; of the mean ~ 2.887; 3 sd bound.
  EXPECT_NEAR(sx / 10000, 499.5, 8.7);
  EXPECT_NEAR(sy / 10000, 499.5, 8.7);
}

TEST(MeanDistance, CentreBeatsCorner) {
  Rng a(1), b(1);
  const std::vector<Position> centre = {{500, 500}}, corner = {{0, 0}};
  EXPECT_LT(mean_distance_to_nearest(centre, 1000, 20000, a).mean,
            mean_distance_to_nearest(corner, 1000, 20000, b).mean);
}

TEST(MeanDistance, FullCoverageIsZero) {
  std::vector<Position> all;
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) all.push_back({x, y});
  Rng rng(1);
  const auto m = mean_distance_to_nearest(all, 5, 1000, rng);
  EXPECT_EQ(m.mean, 0.0);
  EXPECT_EQ(m.std_error, 0.0);
}

TEST(MeanDistance, SingleCentreNearAnalytic) {
  // Mean distance from the centre of a unit square: (sqrt2 + asinh 1) / 6.
  Rng rng(8);
  const auto m = mean_distance_to_nearest(optimized_positions(1, 1000), 1000, 50000, rng);
  const double expected = 1000.0 * (std::sqrt(2.0) + std::asinh(1.0)) / 6.0;
  EXPECT_NEAR(m.mean, expected, 4 * m.std_error + 1.0);
}

TEST(MeanDistance, LatticeBeatsRandomNine) {
  Rng sample(11);
  const double lattice = mean_distance_to_nearest(optimized_positions(9, 1000), 1000, 20000,
                                                  sample).mean;
  int beaten = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Rng place(seed), eval(seed + 1000000);
    const auto random = random_positions(9, 1000, place);
    beaten += lattice < mean_distance_to_nearest(random, 1000, 2000, eval).mean;
  }
  EXPECT_GE(beaten, 950);
}

TEST(MeanDistance, LatticeBeatsRandomAverageForEachK) {
  for (std::int32_t k : {1, 4, 9, 16}) {
    Rng sample(20 + k);
    const double lattice =
        mean_distance_to_nearest(optimized_positions(k, 1000), 1000, 20000, sample).mean;
    double sum = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Rng place(seed * 7 + k), eval(seed * 13 + k);
      sum += mean_distance_to_nearest(random_positions(k, 1000, place), 1000, 2000, eval).mean;
    }
    EXPECT_LT(lattice, sum / 100) << "k=" << k;
  }
}

TEST(PlaceEdgeNodes, Dispatch) {
  Rng rng(1);
  EXPECT_EQ(place_edge_nodes(placement_spec::OptimizedLattice{4}, 100, rng).size(), 4u);
  EXPECT_EQ(place_edge_nodes(placement_spec::UniformRandom{3}, 100, rng).size(), 3u);
  const std::vector<Position> ex = {{1, 2}, {3, 4}};
  EXPECT_EQ(place_edge_nodes(placement_spec::Explicit{ex}, 100, rng), ex);
}
