#include <gtest/gtest.h>

#include <set>

#include "ustlocal/error.hpp"
#include "ustlocal/generators.hpp"
#include "ustlocal/walk.hpp"

using namespace ustlocal;

TEST(Walk, StepsFollowEdges) {
  const Network cube = hypercube_graph(5);
  Rng rng(11);
  const WalkPath path = random_walk(cube, 3, 500, rng);
  ASSERT_EQ(path.steps(), 500u);
  EXPECT_EQ(path.vertices.front(), 3);
  for (std::size_t i = 0; i < path.steps(); ++i)
    EXPECT_TRUE(cube.adjacent(path.vertices[i], path.vertices[i + 1]));
  EXPECT_THROW(random_walk(cube, 99, 1, rng), VertexOutOfRange);
}

TEST(Walk, StationaryOnRegularIsUniform) {
  const Network c = cycle_graph(5);
  Rng rng(2);
  std::vector<int> hits(5, 0);
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) ++hits[stationary_vertex(c, rng)];
  const double sigma = std::sqrt(0.2 * 0.8 / trials);
  for (const int h : hits) EXPECT_NEAR(h / static_cast<double>(trials), 0.2, 4 * sigma);
}

TEST(Walk, PatternValidity) {
  EXPECT_TRUE((TreePattern{{-1, 0, 1}}.valid()));
  EXPECT_FALSE((TreePattern{{-1, 2, 0}}.valid()));
  EXPECT_FALSE((TreePattern{{0, 0}}.valid()));
  const Network k5 = complete_graph(5);
  Rng rng(1);
  EXPECT_THROW(t_compatible_sample(k5, TreePattern{{-1, 1}}, rng), InvalidParams);
}

TEST(Walk, CompatibleTuplesRealizePattern) {
  const Network k6 = complete_graph(6);
  const TreePattern cherry{{-1, 0, 0}};
  Rng rng(5);
  int compatible = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    const TupleSample s = t_compatible_sample(k6, cherry, rng);
    ASSERT_EQ(s.vertices.size(), 3u);
    EXPECT_EQ(s.compatible, is_t_compatible(k6, cherry, s.vertices));
    if (s.compatible) {
      EXPECT_EQ(std::set<VertexId>(s.vertices.begin(), s.vertices.end()).size(), 3u);
      ++compatible;
    }
  }
  // Two independent neighbors of the root differ with probability 4/5.
  EXPECT_NEAR(compatible / static_cast<double>(trials), 0.8, 4 * std::sqrt(0.16 / trials));
  const VertexId bad[] = {0, 1, 1};
  EXPECT_FALSE(is_t_compatible(k6, cherry, bad));
}
