#pragma once

#include <cstddef>
#include <span>

#include "ustlocal/contraction.hpp"
#include "ustlocal/electric.hpp"
#include "ustlocal/spanning_tree.hpp"

namespace ustlocal {

/// Loop-erased random walk sampler. Law proportional to the product of tree
/// conductances; rooted at `root` (the unrooted law does not depend on it).
SpanningTree wilson(const Network& net, Rng& rng, VertexId root = 0);

/// First-entrance tree of a walk started at vertex 0 run until cover.
SpanningTree aldous_broder(const Network& net, Rng& rng);

/// Kirchhoff check: frequency of e in `samples` Wilson trees against c(e) R(e).
MonteCarloComparison edge_probability_check(const Network& net, EdgeKey e, std::size_t samples,
                                            Rng& rng);

/// Samples the UST of `net` conditioned to contain A and avoid B by sampling
/// the weighted UST of G/A - B and lifting each contracted edge back to one of
/// the original edges it merged, chosen proportionally to conductance.
class ConditionedSampler {
 public:
  /// Throws NotAnEdge, InvalidParams, CycleInA, DisconnectsGraph.
  ConditionedSampler(const Network& net, std::span<const EdgeKey> contain,
                     std::span<const EdgeKey> avoid);

  SpanningTree sample(Rng& rng) const;
  const Contraction& contraction() const noexcept { return contraction_; }

 private:
  VertexId vertex_count_;
  std::vector<EdgeKey> contain_;
  Contraction contraction_;
};

SpanningTree sample_conditioned(const Network& net, std::span<const EdgeKey> contain,
                                std::span<const EdgeKey> avoid, Rng& rng);

struct CorrelationCheck {
  double p_both = 0.0;  // empirical P(e and f)
  double p_e = 0.0;     // empirical marginals
  double p_f = 0.0;
  double exact_both = 0.0;  // c(e)R(e) * c(f)R_{G/e}(f)
  double exact_product = 0.0;
  double sigma = 0.0;  // standard error of p_both
  std::size_t samples = 0;

  /// p_both <= p_e * p_f + sigmas * sigma.
  bool holds(double sigmas = kDefaultSigmaGate) const;
};

/// Negative correlation of edge events; throws InvalidParams when e == f.
CorrelationCheck negative_correlation_check(const Network& net, EdgeKey e, EdgeKey f,
                                            std::size_t samples, Rng& rng);

/// P(e and f both in the UST) from resistances: contract e, then Kirchhoff.
double exact_pair_probability(const Network& net, EdgeKey e, EdgeKey f);

/// Release builds audit every 100th sampler output, debug builds all of them.
inline constexpr std::size_t kReleaseAuditPeriod = 100;

}  // namespace ustlocal
