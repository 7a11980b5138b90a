#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ustlocal/harness/config.hpp"
#include "ustlocal/harness/report.hpp"
#include "ustlocal/spanning_tree.hpp"

namespace ustlocal::harness {

struct LoadedGraph {
  Network net;
  std::string description;
  std::optional<GraphSpec> spec;
};

/// Generates or reads the configured graph. Throws on config errors.
LoadedGraph load_graph(const ExperimentConfig& config);

/// `count` Wilson trees; tree i uses stream `stream + i` of `seed`.
std::vector<SpanningTree> sample_trees(const Network& net, std::size_t count, std::uint64_t seed,
                                       std::uint64_t stream, unsigned threads);

/// Ball census against the conditioned limit law: TV distance, per-shape
/// z-scores, leaf fraction, quenched concentration, annealed/quenched agreement.
ExperimentReport run_local_limit(const ExperimentConfig& config);

/// Foster identity and its variants: edge-mean identity, high-resistance cap,
/// walk-endpoint mean and tail bounds, tuple concentration band.
ExperimentReport run_foster_suite(const ExperimentConfig& config);

/// Tail curves of tree degree and ball size; k^2 P(deg >= k) gate; hub degree
/// on the star-of-cliques construction.
ExperimentReport run_tail_suite(const ExperimentConfig& config);

/// UST diameter statistics, with scaling gates on paths, complete graphs and
/// chained cliques.
ExperimentReport run_diameter(const ExperimentConfig& config);

/// Every electric and sampler identity on a small graph against exhaustive
/// spanning-tree enumeration.
ExperimentReport run_verify_core(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace ustlocal::harness
