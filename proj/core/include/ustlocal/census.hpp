#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ustlocal/limit_law.hpp"
#include "ustlocal/spanning_tree.hpp"

namespace ustlocal {

enum class VertexSelection {
  all,          // every vertex of every tree (quenched counts)
  uniform_one,  // one uniform vertex per tree (annealed law)
};

/// Tally of radius-r ball shapes over a stream of trees.
struct BallCensus {
  std::string graph;
  int radius = 0;
  std::uint64_t samples = 0;
  std::uint64_t vertices_per_sample = 0;
  std::uint64_t seed = 0;
  std::map<CanonicalCode, std::uint64_t> counts;

  std::uint64_t total() const noexcept;
  /// Empirical frequency of a code.
  double frequency(const CanonicalCode& code) const;
  /// Fraction of balls whose height is below the radius (the tree ended early).
  double short_fraction() const;

  /// Adds another census over the same radius and selection.
  /// Throws InvalidParams if the radii differ.
  void merge(const BallCensus& other);
};

/// Tallies one tree. `rng` is only drawn from for uniform_one.
void add_tree(BallCensus& census, const SpanningTree& tree, VertexSelection selection, Rng& rng);

/// Tallies one sampled shape as its own sample (e.g. a branching-process ball).
void add_shape(BallCensus& census, const RootedShape& shape);

/// Per-code counts for a single tree with every vertex tallied (Y_n(T)).
std::map<CanonicalCode, std::uint64_t> quenched_counts(const SpanningTree& tree, int r);

/// Shapes below this theoretical mass share one residual bucket in tv_distance.
inline constexpr double kTvResidualCutoff = 1e-4;

/// Total variation between the census frequencies and the law. Codes with
/// law mass >= cutoff are compared one by one; everything else, including
/// the law's uncovered mass and codes the law lacks, forms one bucket.
double tv_distance(const BallCensus& census, const LimitLaw& law,
                   double cutoff = kTvResidualCutoff);

/// Plain total variation between two probability tables (missing = 0).
double tv_distance(const std::map<CanonicalCode, double>& p,
                   const std::map<CanonicalCode, double>& q);

/// Census frequencies as a probability table.
std::map<CanonicalCode, double> empirical_law(const BallCensus& census);

}  // namespace ustlocal
