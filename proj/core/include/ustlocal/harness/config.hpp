#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ustlocal/generators.hpp"

namespace ustlocal::harness {

enum class ExperimentKind { local_limit, foster, tail, diameter, verify_core };
ExperimentKind parse_experiment_kind(std::string_view name);  // throws InvalidParams
const char* experiment_name(ExperimentKind kind);

struct Tolerances {
  double sigma_gate = 4.0;  // two-sided z gate before Bonferroni
  bool bonferroni = true;   // widen the gate across the shapes of a census
  double tv_cutoff = 1e-4;  // small-shape pooling threshold
  std::optional<double> tv_max;  // gate: TV below this
  std::optional<double> tv_min;  // gate: TV above this (non-regular demos)
  std::optional<double> leaf_tolerance;  // gate on |leaf fraction - e^-1| at r=1
  double quenched_band = 0.07;
  std::optional<double> quenched_min_fraction;  // gate on the quenched band when set
  double band_constant = 72.0;
  std::optional<double> good_threshold;  // defaults to log(d)/d
  double tail_constant = 20.0;  // Monte Carlo gate constant, not a proven value
  std::size_t tail_min_hits = 30;
  double identity = 1e-9;
  double cross_method = 1e-8;
};

/// Everything that determines a run. Identical configs give identical reports.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::verify_core;
  std::optional<GraphSpec> graph;
  std::optional<std::string> graph_file;
  int radius = 1;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  std::size_t tuples = 10000;  // tuple concentration draws
  std::size_t walks = 10000;   // walk draws for the Foster variants
  std::vector<int> walk_steps{1, 2, 3};
  std::vector<std::string> patterns{"((()))"};  // shape codes for tuple checks
  std::vector<long> chain_counts{4, 8, 16};     // diameter sweep for chained cliques
  int max_shape_vertices = 14;
  std::optional<std::string> target_code;  // quenched shape; default single edge at r=1
  std::optional<int> nominal_degree;       // for almost regular inputs

  Tolerances tol;

  std::optional<std::string> report_json;
  std::optional<std::string> report_csv;
  std::optional<std::string> curves_csv;
};

/// Parses the JSON config format (see README). Throws ParseError or InvalidParams.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

/// Graph spec from the JSON object form {"family": ..., params...}, a short
/// name like "k4", or a path to a graph file.
void set_graph(ExperimentConfig& config, std::string_view text);

}  // namespace ustlocal::harness
