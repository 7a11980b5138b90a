#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bridge.hpp"
#include "ustlocal/error.hpp"
#include "ustlocal/generators.hpp"
#include "ustlocal/samplers.hpp"
#include "ustlocal/spanning_tree.hpp"
#include "ustlocal/tree_enumeration.hpp"

using namespace ustlocal;

namespace {

// Key of a tree as sorted oracle edge indices, for comparing with the
// subset-scan oracle.
std::vector<int> oracle_key(const oracle::Graph& g, const SpanningTree& t) {
  std::vector<int> key;
  for (const EdgeKey& e : t.edges()) {
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (EdgeKey(g.edges[i].first, g.edges[i].second) == e) key.push_back(static_cast<int>(i));
  }
  std::sort(key.begin(), key.end());
  return key;
}

// TV distance between empirical tree frequencies and the exact weighted law
// from the oracle. Returns {tv, expected noise scale}.
template <class Sampler>
std::pair<double, double> law_tv(const Network& net, std::size_t samples, Sampler&& sample) {
  const auto g = testing_bridge::to_oracle(net);
  const auto trees = oracle::spanning_trees(g);
  std::map<std::vector<int>, double> exact;
  double total = 0.0;
  for (const auto& t : trees) {
    double weight = 1.0;
    for (const int e : t) weight *= oracle::w(g, e);
    exact[t] = weight;
    total += weight;
  }
  std::map<std::vector<int>, double> seen;
  for (std::size_t i = 0; i < samples; ++i) seen[oracle_key(g, sample())] += 1.0;
  double tv = 0.0, noise = 0.0;
  for (auto& [key, weight] : exact) {
    const double p = weight / total;
    tv += std::abs(seen[key] / samples - p);
    noise += std::sqrt(p * (1 - p) / samples);
  }
  EXPECT_EQ(seen.size(), exact.size()) << "sampler produced a non-tree";
  return {tv / 2, noise};
}

}  // namespace

TEST(SpanningTreeType, FromEdgesAndValidation) {
  const Network k4 = complete_graph(4);
  const EdgeKey star[] = {{0, 1}, {0, 2}, {0, 3}};
  const SpanningTree t = SpanningTree::from_edges(4, star, 2);
  EXPECT_EQ(t.root(), 2);
  EXPECT_TRUE(t.is_valid(k4));
  EXPECT_TRUE(t.contains(3, 0));
  EXPECT_FALSE(t.contains(1, 2));
  const EdgeKey cycle[] = {{0, 1}, {1, 2}, {0, 2}};
  EXPECT_THROW(SpanningTree::from_edges(4, cycle), InvalidParams);
  const SpanningTree foreign = SpanningTree::from_edges(4, star);
  EXPECT_FALSE(foreign.is_valid(path_graph(4)));
  EXPECT_THROW(foreign.validate(path_graph(4)), InvalidParams);
}

TEST(SpanningTreeType, AdjacencyDistancesAndDiameter) {
  const EdgeKey path[] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  const TreeAdjacency adj(SpanningTree::from_edges(5, path));
  EXPECT_EQ(adj.diameter(), 4);
  EXPECT_EQ(adj.distances(2), (std::vector<int>{2, 1, 0, 1, 2}));
  EXPECT_EQ(adj.degree(0), 1);
  EXPECT_EQ(adj.degree(2), 2);
}

TEST(TreeCount, EnumerationMatchesOracleAndMatrixTree) {
  Rng rng(5);
  std::vector<Network> nets{complete_graph(4), complete_graph(5), cycle_graph(5),
                            complete_bipartite_graph(3, 3), hypercube_graph(3)};
  nets.push_back(testing_bridge::random_weighted(7, 6, rng));
  for (const Network& net : nets) {
    const auto g = testing_bridge::to_oracle(net);
    const auto trees = oracle::spanning_trees(g);
    double weight = 0.0;
    for (const auto& t : trees) {
      double w = 1.0;
      for (const int e : t) w *= oracle::w(g, e);
      weight += w;
    }
    const TreeEnumeration enumeration(net);
    EXPECT_EQ(enumeration.size(), trees.size());
    EXPECT_NEAR(enumeration.total_weight(), weight, 1e-9 * weight);
    EXPECT_NEAR(matrix_tree_count(net), weight, 1e-9 * weight);
  }
  EXPECT_EQ(TreeEnumeration(complete_graph(4)).size(), 16u);
  EXPECT_EQ(TreeEnumeration(cycle_graph(5)).size(), 5u);
  EXPECT_EQ(TreeEnumeration(complete_bipartite_graph(3, 3)).size(), 81u);
  EXPECT_THROW(TreeEnumeration(complete_graph(8), 1000), LimitExceeded);
}

TEST(Kirchhoff, EdgeProbabilityIsConductanceTimesResistance) {
  Rng rng(9);
  const Network net = testing_bridge::random_weighted(7, 8, rng);
  const TreeEnumeration trees(net);
  const auto lplus = oracle::pseudo_inverse(oracle::laplacian(testing_bridge::to_oracle(net)));
  for (const auto& e : net.edges()) {
    const EdgeKey key{e.u, e.v};
    EXPECT_NEAR(trees.probability_all(std::span(&key, 1)),
                e.conductance * oracle::resistance(lplus, e.u, e.v), 1e-10);
  }
}

TEST(Samplers, WilsonMatchesExactLaw) {
  for (const Network& net : {complete_graph(4), cycle_graph(5)}) {
    Rng rng(21);
    const auto [tv, noise] = law_tv(net, 100000, [&] { return wilson(net, rng); });
    EXPECT_LT(tv, 3 * noise);
  }
}

TEST(Samplers, WilsonWeightedAndRootIndependent) {
  Rng graph_rng(6);
  const Network net = testing_bridge::random_weighted(5, 4, graph_rng);
  Rng rng(22);
  const auto [tv, noise] = law_tv(net, 100000, [&] { return wilson(net, rng, 3); });
  EXPECT_LT(tv, 3 * noise);
}

TEST(Samplers, AldousBroderMatchesExactLaw) {
  for (const Network& net : {complete_graph(4), complete_bipartite_graph(2, 3)}) {
    Rng rng(23);
    const auto [tv, noise] = law_tv(net, 100000, [&] { return aldous_broder(net, rng); });
    EXPECT_LT(tv, 3 * noise);
  }
}

TEST(Samplers, OutputsAreValidTrees) {
  Rng rng(1);
  const Network rr = random_regular_graph(200, 6, rng);
  for (int i = 0; i < 20; ++i) {
    EXPECT_TRUE(wilson(rr, rng).is_valid(rr));
    EXPECT_TRUE(aldous_broder(rr, rng).is_valid(rr));
  }
}

TEST(Samplers, SameSeedSameTree) {
  const Network q4 = hypercube_graph(4);
  Rng a(99), b(99);
  EXPECT_EQ(wilson(q4, a), wilson(q4, b));
}

TEST(Samplers, EdgeProbabilityCheck) {
  Rng rng(3);
  const auto check = edge_probability_check(complete_graph(6), EdgeKey{0, 1}, 50000, rng);
  EXPECT_NEAR(check.predicted, 2.0 / 6.0, 1e-12);
  EXPECT_TRUE(check.within());
}

TEST(Conditioned, SupportAndLawOnK4) {
  const Network k4 = complete_graph(4);
  const EdgeKey contain[] = {{0, 1}};
  const EdgeKey avoid[] = {{2, 3}};
  const TreeEnumeration trees(k4);
  const auto exact = trees.conditional_law(contain, avoid);
  const ConditionedSampler sampler(k4, contain, avoid);
  Rng rng(4);
  std::vector<double> seen(trees.size(), 0.0);
  const int samples = 60000;
  for (int i = 0; i < samples; ++i) {
    const SpanningTree t = sampler.sample(rng);
    ASSERT_TRUE(t.is_valid(k4));
    ASSERT_TRUE(t.contains(0, 1));
    ASSERT_FALSE(t.contains(2, 3));
    seen[trees.index_of(t.edge_mask(k4))] += 1.0 / samples;
  }
  // The oracle: uniform over the trees satisfying the event.
  int support = 0;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto edges = trees.tree_edges(i);
    const bool ok = std::count(edges.begin(), edges.end(), EdgeKey{0, 1}) == 1 &&
                    std::count(edges.begin(), edges.end(), EdgeKey{2, 3}) == 0;
    support += ok;
    EXPECT_EQ(exact[i] > 0, ok);
  }
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (exact[i] == 0) continue;
    EXPECT_NEAR(exact[i], 1.0 / support, 1e-12);
    EXPECT_NEAR(seen[i], exact[i], 4 * std::sqrt(exact[i] * (1 - exact[i]) / samples));
  }
}

TEST(Conditioned, WeightedLiftUsesConductances) {
  // Contracting {0,1} in this weighted K_4 merges parallel edges of unequal
  // conductance, so the lift must choose among them proportionally.
  const WeightedEdge edges[] = {{0, 1, 1.0}, {0, 2, 3.0}, {1, 2, 1.0},
                                {0, 3, 1.0}, {1, 3, 2.0}, {2, 3, 0.5}};
  const Network net = Network::build(4, edges);
  const EdgeKey contain[] = {{0, 1}};
  const TreeEnumeration trees(net);
  const auto exact = trees.conditional_law(contain, {});
  Rng rng(8);
  std::vector<double> seen(trees.size(), 0.0);
  const int samples = 80000;
  for (int i = 0; i < samples; ++i)
    seen[trees.index_of(sample_conditioned(net, contain, {}, rng).edge_mask(net))] += 1.0 / samples;
  for (std::size_t i = 0; i < trees.size(); ++i)
    EXPECT_NEAR(seen[i], exact[i], 4 * std::sqrt(exact[i] * (1 - exact[i]) / samples) + 1e-12);
}

TEST(Conditioned, Errors) {
  const Network k3 = complete_graph(3);
  const EdgeKey cycle[] = {{0, 1}, {1, 2}, {0, 2}};
  EXPECT_THROW(ConditionedSampler(k3, cycle, {}), CycleInA);
  const EdgeKey two[] = {{0, 1}, {0, 2}};
  EXPECT_THROW(ConditionedSampler(k3, {}, two), DisconnectsGraph);
  const TreeEnumeration trees(k3);
  const EdgeKey e[] = {{0, 1}};
  EXPECT_THROW(trees.conditional_law(e, e), InvalidParams);
}

TEST(Correlation, ExactPairAndNegativeCorrelation) {
  Rng rng(12);
  const Network net = testing_bridge::random_weighted(6, 7, rng);
  const TreeEnumeration trees(net);
  const auto& edges = net.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const EdgeKey pair[] = {{edges[i].u, edges[i].v}, {edges[j].u, edges[j].v}};
      const double both = trees.probability_all(pair);
      EXPECT_NEAR(exact_pair_probability(net, pair[0], pair[1]), both, 1e-10);
      EXPECT_LE(both, trees.probability_all(std::span(pair, 1)) *
                              trees.probability_all(std::span(pair + 1, 1)) + 1e-12);
    }
  const auto check = negative_correlation_check(complete_graph(5), {0, 1}, {1, 2}, 40000, rng);
  EXPECT_TRUE(check.holds());
  EXPECT_LE(check.exact_both, check.exact_product);
  EXPECT_THROW(negative_correlation_check(complete_graph(5), {0, 1}, {1, 0}, 10, rng), InvalidParams);
}
