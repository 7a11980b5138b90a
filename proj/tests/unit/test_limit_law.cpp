#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "ustlocal/census.hpp"
#include "ustlocal/error.hpp"
#include "ustlocal/limit_law.hpp"
#include "ustlocal/pgw.hpp"

using namespace ustlocal;

namespace {

// Unconditioned ball law computed from plane-tree counting: each ordered
// realization has probability prod over internal positions e^-1 / k!, and
// there are prod k! / |Aut| of them. Automorphisms come from brute force.
double oracle_unconditional(const std::vector<int>& parent, int r) {
  const int n = static_cast<int>(parent.size());
  std::vector<int> depth(n, 0);
  for (int v = 1; v < n; ++v) depth[v] = depth[parent[v]] + 1;
  const int height = *std::max_element(depth.begin(), depth.end());
  if (height > r) return 0.0;
  int internal_positions = 0;  // vertices whose offspring count is observed
  for (int v = 0; v < n; ++v) internal_positions += depth[v] < r;
  return std::exp(-internal_positions) / static_cast<double>(oracle::automorphisms(parent));
}

}  // namespace

TEST(LimitLaw, RadiusOneClosedForms) {
  // A root with k children: conditioned mass e^-1 / (k-1)!.
  std::vector<RootedShape> kids;
  double factorial = 1.0;
  for (int k = 1; k <= 8; ++k) {
    kids.emplace_back();
    EXPECT_NEAR(limit_prob_conditioned(RootedShape::join(kids), 1), std::exp(-1.0) / factorial, 1e-15);
    factorial *= k;
  }
  EXPECT_EQ(limit_prob_conditioned(RootedShape(), 1), 0.0);
  EXPECT_THROW(limit_prob_conditioned(RootedShape(), 0), InvalidParams);
  EXPECT_NEAR(limit_prob_unconditional(RootedShape(), 1), std::exp(-1.0), 1e-15);
}

TEST(LimitLaw, MatchesPlaneTreeOracle) {
  std::set<std::string> seen;
  oracle::for_each_parent_array(7, [&](const std::vector<int>& parent) {
    const RootedShape shape = RootedShape::from_parents(parent);
    if (!seen.insert(shape.code()).second) return;
    for (int r = 1; r <= 4; ++r) {
      const double uncond = oracle_unconditional(parent, r);
      EXPECT_NEAR(limit_prob_unconditional(shape, r), uncond, 1e-14) << shape.code();
      // Size-biasing by the last generation gives the survival-conditioned law.
      const double cond = shape.height() == r ? shape.last_level_count() * uncond : 0.0;
      EXPECT_NEAR(limit_prob_conditioned(shape, r), cond, 1e-14) << shape.code();
    }
  });
}

TEST(LimitLaw, EnumerationCountsRootedTrees) {
  const auto expected = oracle::rooted_tree_counts(12);
  const auto shapes = enumerate_shapes(12);
  std::vector<std::uint64_t> by_size(13, 0);
  std::set<std::string> codes;
  for (const auto& s : shapes) {
    ++by_size[s.size()];
    codes.insert(s.code());
  }
  EXPECT_EQ(codes.size(), shapes.size());
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(by_size[n], expected[n]) << n;
  EXPECT_THROW(enumerate_shapes(17), LimitExceeded);
  for (const auto& s : enumerate_shapes(10, {.exact_height = 3})) EXPECT_EQ(s.height(), 3);
  for (const auto& s : enumerate_shapes(10, {.max_height = 2})) EXPECT_LE(s.height(), 2);
}

TEST(LimitLaw, Normalization) {
  // Radius 1: the missing mass is the Poisson tail beyond 15 children.
  EXPECT_NEAR(conditioned_law(1, 16).covered_mass, 1.0, 1e-12);
  EXPECT_NEAR(unconditional_law(1, 16).covered_mass, 1.0, 1e-12);
  // Radius 2 by counting generation sizes: k children ~ Poisson(1), then
  // s grandchildren ~ Poisson(k). The conditioned law size-biases by s.
  for (const int cap : {12, 14, 16}) {
    double uncond = 0.0, cond = 0.0;
    for (int k = 0; k < cap; ++k)
      for (int s = 0; 1 + k + s <= cap; ++s) {
        const double pk = std::exp(-1.0) / std::tgamma(k + 1.0);
        const double ps = k == 0 ? (s == 0 ? 1.0 : 0.0)
                                 : std::exp(-k) * std::pow(k, s) / std::tgamma(s + 1.0);
        uncond += pk * ps;
        cond += pk * ps * s;
      }
    EXPECT_NEAR(unconditional_law(2, cap).covered_mass, uncond, 1e-12) << cap;
    EXPECT_NEAR(conditioned_law(2, cap).covered_mass, cond, 1e-12) << cap;
  }
  EXPECT_GE(unconditional_law(2, 14).covered_mass, 0.995);
  for (int r = 2; r <= 4; ++r) {
    EXPECT_LE(conditioned_law(r, 16).covered_mass, 1.0 + 1e-12);
    EXPECT_LE(unconditional_law(r, 16).covered_mass, 1.0 + 1e-12);
    EXPECT_GT(conditioned_law(r, 16).covered_mass, conditioned_law(r, 12).covered_mass);
  }
}

TEST(LimitLaw, SurvivalProbabilities) {
  EXPECT_EQ(survival_prob(0), 1.0);
  EXPECT_NEAR(survival_prob(1), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(survival_prob(2), 1.0 - std::exp(-(1.0 - std::exp(-1.0))), 1e-15);
  // n p_n -> 2 with a log n / n correction.
  const double p = survival_prob(1'000'000);
  EXPECT_NEAR(1e6 * p, 2.0, 1e-4);
  for (long n = 1; n < 200; ++n) EXPECT_LT(survival_prob(n), survival_prob(n - 1));
}

TEST(Pgw, PoissonMoments) {
  Rng rng(5);
  const int n = 400000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = poisson1(rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 1.0, 4 * std::sqrt(1.0 / n));
  EXPECT_NEAR(var, 1.0, 4 * std::sqrt(3.0 / n));
}

TEST(Pgw, SampledBallsFollowLaws) {
  Rng rng(6);
  const int n = 200000;
  BallCensus uncond{"pgw", 2}, cond{"pgw_conditioned", 2};
  for (int i = 0; i < n; ++i) {
    add_shape(uncond, sample_pgw(rng, 2));
    const RootedShape c = sample_pgw_conditioned(rng, 2);
    ASSERT_EQ(c.height(), 2);
    add_shape(cond, c);
  }
  // Noise floor for about twenty shapes above the pooling cutoff.
  EXPECT_LT(tv_distance(uncond, unconditional_law(2, 16)), 0.01);
  EXPECT_LT(tv_distance(cond, conditioned_law(2, 16)), 0.01);
}
