#include "ustlocal/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ustlocal/census.hpp"
#include "ustlocal/electric.hpp"
#include "ustlocal/error.hpp"
#include "ustlocal/graph_io.hpp"
#include "ustlocal/harness/parallel.hpp"
#include "ustlocal/limit_law.hpp"
#include "ustlocal/regularity.hpp"
#include "ustlocal/rooted_shape.hpp"
#include "ustlocal/samplers.hpp"
#include "ustlocal/tree_enumeration.hpp"

namespace ustlocal::harness {

namespace {

// Stream blocks; each consumer of randomness gets its own so adding a check
// never shifts the draws of another.
constexpr std::uint64_t kBlock = std::uint64_t{1} << 40;
constexpr std::uint64_t kTreeStream = 1 * kBlock;
constexpr std::uint64_t kWalkStream = 2 * kBlock;
constexpr std::uint64_t kTupleStream = 3 * kBlock;
constexpr std::uint64_t kAldousStream = 4 * kBlock;
constexpr std::uint64_t kConditionedStream = 5 * kBlock;
constexpr std::uint64_t kMiscStream = 6 * kBlock;
constexpr std::size_t kChunk = 4096;

std::string edge_name(VertexId u, VertexId v) { return std::to_string(u) + "-" + std::to_string(v); }

int nominal_degree(const ExperimentConfig& config, const Network& net) {
  if (config.nominal_degree) return *config.nominal_degree;
  return static_cast<int>(std::lround(2.0 * static_cast<double>(net.edge_count()) / net.vertex_count()));
}

ExperimentReport start_report(const ExperimentConfig& config, const LoadedGraph& g) {
  ExperimentReport report;
  report.experiment = experiment_name(config.kind);
  report.graph = g.description;
  report.seed = config.seed;
  return report;
}

double mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

// Tallies of tree indices over `samples` draws, chunked for determinism.
template <class Sampler>
std::vector<std::uint64_t> tally_trees(const TreeEnumeration& trees, const Network& net,
                                       std::size_t samples, std::uint64_t seed, std::uint64_t stream,
                                       unsigned threads, Sampler&& sampler) {
  const auto chunks = make_chunks(samples, kChunk);
  const auto parts = run_tasks<std::vector<std::uint64_t>>(
      chunks.size(), threads, seed, stream, [&](std::size_t c, Rng& rng) {
        std::vector<std::uint64_t> counts(trees.size(), 0);
        for (std::size_t s = chunks[c].begin; s < chunks[c].end; ++s) {
          const auto idx = trees.index_of(sampler(rng).edge_mask(net));
          if (idx < 0) throw InvalidParams("sampler produced a tree outside the enumeration");
          ++counts[static_cast<std::size_t>(idx)];
        }
        return counts;
      });
  std::vector<std::uint64_t> total(trees.size(), 0);
  for (const auto& part : parts)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
  return total;
}

// Per-outcome z-scores of an empirical tally against an exact law, with a
// Bonferroni gate over the outcomes of positive mass. Returns the largest |z|.
double law_z_checks(ExperimentReport& report, const std::string& prefix,
                    std::span<const std::uint64_t> counts, std::span<const double> law,
                    const Tolerances& tol, bool record_each) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  const auto support = static_cast<std::size_t>(std::count_if(law.begin(), law.end(), [](double p) { return p > 0.0; }));
  const double gate = tol.bonferroni ? bonferroni_gate(tol.sigma_gate, support) : tol.sigma_gate;
  double worst = 0.0;
  bool all_pass = true;
  for (std::size_t i = 0; i < law.size(); ++i) {
    const double p = law[i], f = counts[i] / n;
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    const double z = sigma > 0.0 ? std::abs(f - p) / sigma : (f == p ? 0.0 : INFINITY);
    worst = std::max(worst, z);
    all_pass = all_pass && z <= gate;
    if (record_each) report.add_z(prefix + ":" + std::to_string(i), f, p, sigma, gate);
  }
  if (!record_each) {
    auto& r = report.add_at_most(prefix + "_max_z", worst, gate);
    r.rule = "max|z|<=" + format_double(gate);
    r.pass = all_pass;
  }
  return worst;
}

double tally_tv(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  const double na = std::accumulate(a.begin(), a.end(), 0.0), nb = std::accumulate(b.begin(), b.end(), 0.0);
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] / na - b[i] / nb);
  return 0.5 * tv;
}

}  // namespace

LoadedGraph load_graph(const ExperimentConfig& config) {
  if (config.graph_file) {
    return {read_network_file(*config.graph_file), "file:" + *config.graph_file, std::nullopt};
  }
  if (!config.graph) throw InvalidParams("no graph configured");
  return {generate(*config.graph, config.seed), config.graph->describe(), config.graph};
}

std::vector<SpanningTree> sample_trees(const Network& net, std::size_t count, std::uint64_t seed,
                                       std::uint64_t stream, unsigned threads) {
  return run_tasks<SpanningTree>(count, threads, seed, stream,
                                 [&](std::size_t, Rng& rng) { return wilson(net, rng); });
}

// ---------------------------------------------------------------------------

ExperimentReport run_local_limit(const ExperimentConfig& config) {
  if (config.radius < 1) throw InvalidParams("local_limit needs radius >= 1");
  const LoadedGraph g = load_graph(config);
  const Network& net = g.net;
  const int r = config.radius;
  const std::size_t samples = config.samples;
  const auto n = static_cast<double>(net.vertex_count());
  ExperimentReport report = start_report(config, g);

  const LimitLaw law = conditioned_law(r, config.max_shape_vertices);
  report.metrics["law_covered_mass"] = law.covered_mass;
  report.metrics["regular"] = net.is_regular() ? 1.0 : 0.0;

  struct SampleTally {
    std::map<CanonicalCode, std::uint64_t> quenched;
    CanonicalCode annealed;
  };
  const auto tallies = run_tasks<SampleTally>(samples, config.threads, config.seed, kTreeStream,
                                              [&](std::size_t, Rng& rng) {
                                                const SpanningTree tree = wilson(net, rng);
                                                const TreeAdjacency adj(tree);
                                                SampleTally t;
                                                t.quenched = quenched_counts(tree, r);
                                                const auto v = static_cast<VertexId>(
                                                    uniform_index(rng, static_cast<std::uint64_t>(net.vertex_count())));
                                                t.annealed = ball_code(adj, v, r);
                                                return t;
                                              });

  BallCensus pooled{g.description, r, 0, static_cast<std::uint64_t>(net.vertex_count()), config.seed, {}};
  BallCensus annealed{g.description, r, 0, 1, config.seed, {}};
  for (const auto& t : tallies) {
    for (const auto& [code, count] : t.quenched) pooled.counts[code] += count;
    ++pooled.samples;
    ++annealed.counts[t.annealed];
    ++annealed.samples;
  }

  // TV against the conditioned law.
  const double tv = tv_distance(pooled, law, config.tol.tv_cutoff);
  const bool expect_far = config.tol.tv_min.has_value();
  if (config.tol.tv_max) report.add_at_most("tv_conditioned", tv, *config.tol.tv_max);
  if (config.tol.tv_min) report.add_at_least("tv_conditioned_min", tv, *config.tol.tv_min);
  if (!config.tol.tv_max && !config.tol.tv_min) report.add_at_most("tv_conditioned", tv, 1.0, 0.0, false);
  report.metrics["tv_conditioned"] = tv;
  report.metrics["tv_annealed"] = tv_distance(annealed, law, config.tol.tv_cutoff);
  report.metrics["short_shape_fraction"] = pooled.short_fraction();

  // Per-shape z-scores from the spread of per-sample fractions, floored at
  // the binomial error so shapes unseen in every sample stay testable.
  std::vector<std::pair<CanonicalCode, double>> gated_shapes;
  for (const auto& [code, p] : law.probability)
    if (p >= config.tol.tv_cutoff) gated_shapes.emplace_back(code, p);
  const double gate = config.tol.bonferroni ? bonferroni_gate(config.tol.sigma_gate, gated_shapes.size())
                                            : config.tol.sigma_gate;
  Curve histogram{"census", {"size", "height", "observed", "predicted"}, {}};
  for (const auto& [code, p] : gated_shapes) {
    std::vector<double> fractions;
    fractions.reserve(samples);
    for (const auto& t : tallies) {
      const auto it = t.quenched.find(code);
      fractions.push_back(it == t.quenched.end() ? 0.0 : it->second / n);
    }
    const double m = mean(fractions);
    const double sigma = std::max(sample_sd(fractions) / std::sqrt(static_cast<double>(samples)),
                                  std::sqrt(p * (1.0 - p) / (static_cast<double>(samples) * n)));
    report.add_z("shape:" + code, m, p, sigma, gate, !expect_far);
    histogram.rows.push_back({static_cast<double>(code_size(code)), static_cast<double>(code_height(code)), m, p});
  }
  report.curves.push_back(std::move(histogram));

  // Leaf density.
  if (r == 1) {
    const RootedShape edge = RootedShape::from_code("(())");
    const double leaf = pooled.frequency(edge.code());
    const double predicted = limit_prob_conditioned(edge, 1);
    report.metrics["leaf_fraction"] = leaf;
    if (config.tol.leaf_tolerance) report.add_abs("leaf_fraction", leaf, predicted, *config.tol.leaf_tolerance);
  }

  // Quenched concentration of Y_n(T) / (n p_T) and annealed agreement.
  std::optional<CanonicalCode> target = config.target_code;
  if (!target && r == 1) target = "(())";
  if (target) {
    const RootedShape shape = RootedShape::from_code(*target);
    const double p = limit_prob_conditioned(shape, r);
    if (p <= 0.0) throw InvalidParams("target shape has zero mass at this radius");
    std::size_t inside = 0;
    std::vector<double> ratios;
    Curve curve{"quenched_ratio", {"sample", "ratio"}, {}};
    for (std::size_t s = 0; s < samples; ++s) {
      const auto it = tallies[s].quenched.find(shape.code());
      const double y = it == tallies[s].quenched.end() ? 0.0 : static_cast<double>(it->second);
      const double ratio = y / (n * p);
      ratios.push_back(ratio);
      inside += std::abs(ratio - 1.0) <= config.tol.quenched_band;
      curve.rows.push_back({static_cast<double>(s), ratio});
    }
    report.curves.push_back(std::move(curve));
    report.add_at_least("quenched_within_band_fraction", static_cast<double>(inside) / samples,
                        config.tol.quenched_min_fraction.value_or(0.0), 0.0,
                        config.tol.quenched_min_fraction.has_value() && !expect_far);
    const double quenched_mean = mean(ratios) * p;
    const double annealed_freq = annealed.frequency(shape.code());
    const double sigma = std::sqrt(std::max(quenched_mean * (1.0 - quenched_mean), 1e-12) / samples);
    report.add_z("annealed_vs_quenched", annealed_freq, quenched_mean, sigma, config.tol.sigma_gate);
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_foster_suite(const ExperimentConfig& config) {
  const LoadedGraph g = load_graph(config);
  const Network& net = g.net;
  ExperimentReport report = start_report(config, g);
  const VertexId n = net.vertex_count();
  const bool regular = net.is_regular() && net.is_simple_unit();
  const int d = regular ? net.degree(0) : nominal_degree(config, net);
  report.metrics["d"] = d;
  report.metrics["regular"] = regular ? 1.0 : 0.0;
  if (!regular) {
    const auto almost = check_almost_regular(net, d);
    report.metrics["almost_regular_delta"] = almost.delta;
    report.notes["variant"] = "almost regular: bounds reported ungated, walks start from stationarity";
  }
  const LaplacianSystem system(net);

  const double foster = foster_sum(net, system);
  report.add_abs("foster_identity", foster, n - 1.0, config.tol.identity * n);

  // Mean edge resistance against 2/d - 2/(nd).
  double edge_sum = 0.0, nash_gap = INFINITY;
  std::size_t edges = 0;
  for (const auto& e : net.edges()) {
    if (e.u == e.v) continue;
    const double res = system.resistance(e.u, e.v);
    edge_sum += res;
    ++edges;
    nash_gap = std::min(nash_gap, res - nash_williams_bound(net, e.u, e.v));
  }
  const double edge_mean = edge_sum / static_cast<double>(edges);
  report.add_abs("edge_mean_resistance", edge_mean, 2.0 / d - 2.0 / (static_cast<double>(n) * d),
                 config.tol.identity, regular);
  report.add_at_least("nash_williams_min_gap", nash_gap, 0.0, config.tol.identity);

  // High-resistance edge count cap for a few eps > 2/d.
  for (const double mult : {3.0, 4.0, 8.0}) {
    const double eps = mult / d;
    const auto count = high_resistance_edges(net, system, eps).size();
    report.add_at_most("high_resistance_count_eps" + format_double(mult) + "/d", static_cast<double>(count),
                       high_resistance_cap(n, d, eps), 0.0, regular);
  }

  // Walk endpoint resistance: mean bound and tail bound.
  const TupleStart start = regular ? TupleStart::uniform : TupleStart::stationary;
  for (const int k : config.walk_steps) {
    if (k < 1) throw InvalidParams("walk steps must be >= 1");
    const auto chunks = make_chunks(config.walks, kChunk);
    const double eps = 4.0 / d;
    struct WalkSums {
      double sum = 0.0, sum_sq = 0.0;
      std::size_t tail = 0;
    };
    const auto parts = run_tasks<WalkSums>(
        chunks.size(), config.threads, config.seed, kWalkStream + static_cast<std::uint64_t>(k) * (kBlock >> 8),
        [&](std::size_t c, Rng& rng) {
          WalkSums w;
          for (std::size_t s = chunks[c].begin; s < chunks[c].end; ++s) {
            const VertexId x0 = start == TupleStart::uniform
                                    ? static_cast<VertexId>(uniform_index(rng, static_cast<std::uint64_t>(n)))
                                    : net.stationary_vertex(rng);
            const auto path = random_walk(net, x0, static_cast<std::size_t>(k), rng);
            const double res = system.resistance(x0, path.vertices.back());
            w.sum += res;
            w.sum_sq += res * res;
            w.tail += res >= eps;
          }
          return w;
        });
    WalkSums total;
    for (const auto& p : parts) {
      total.sum += p.sum;
      total.sum_sq += p.sum_sq;
      total.tail += p.tail;
    }
    const auto walks = static_cast<double>(config.walks);
    const double m = total.sum / walks;
    const double var = std::max(0.0, (total.sum_sq - walks * m * m) / std::max(1.0, walks - 1.0));
    const double mean_bound = 2.0 / d + 2.0 * (k - 1) / (static_cast<double>(d) * d);
    report.add_at_most("walk_mean_resistance_k" + std::to_string(k), m, mean_bound,
                       config.tol.sigma_gate * std::sqrt(var / walks), regular);
    const double tail = total.tail / walks;
    const double tail_bound = 2.0 * k / (eps * d * d - 2.0 * d);
    report.add_at_most("walk_tail_k" + std::to_string(k), tail, tail_bound,
                       config.tol.sigma_gate * std::sqrt(std::max(tail_bound * (1.0 - tail_bound), 0.0) / walks),
                       regular);
  }

  // Tuple concentration band.
  for (const auto& code : config.patterns) {
    const TreePattern pattern = RootedShape::from_code(code).to_pattern();
    if (pattern.size() < 3) continue;
    TupleExperimentOptions options{d, config.tol.band_constant, start};
    const auto chunks = make_chunks(config.tuples, kChunk);
    const auto parts = run_tasks<std::vector<TupleRecord>>(
        chunks.size(), config.threads, config.seed, kTupleStream, [&](std::size_t c, Rng& rng) {
          return tuple_resistance_experiment(net, system, pattern, chunks[c].end - chunks[c].begin, rng, options);
        });
    std::vector<TupleRecord> records;
    for (const auto& p : parts) records.insert(records.end(), p.begin(), p.end());
    const TupleBand band = tuple_band(pattern.size(), d, config.tol.band_constant);
    const double inside = fraction_inside_band(records);
    report.add_at_least("tuple_band_fraction:" + code, inside, band.min_fraction, 0.0, regular);
    std::vector<double> values;
    for (const auto& rec : records)
      if (rec.compatible) values.push_back(rec.resistance);
    report.metrics["tuple_center:" + code] = band.center;
    report.metrics["tuple_half_width:" + code] = band.half_width;
    report.metrics["tuple_mean_resistance:" + code] = mean(values);
    report.metrics["tuple_compatible_fraction:" + code] =
        static_cast<double>(values.size()) / static_cast<double>(records.size());
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_tail_suite(const ExperimentConfig& config) {
  const LoadedGraph g = load_graph(config);
  const Network& net = g.net;
  ExperimentReport report = start_report(config, g);
  const VertexId n = net.vertex_count();
  const int r = std::max(1, config.radius);

  struct TreeStats {
    std::vector<std::uint64_t> degree_hist;
    std::vector<std::uint64_t> ball_hist;
    double mean_degree = 0.0;
    int hub_degree = 0;
  };
  const auto stats = run_tasks<TreeStats>(config.samples, config.threads, config.seed, kTreeStream,
                                          [&](std::size_t, Rng& rng) {
                                            const SpanningTree tree = wilson(net, rng);
                                            const TreeAdjacency adj(tree);
                                            TreeStats s;
                                            s.degree_hist.assign(static_cast<std::size_t>(n) + 1, 0);
                                            s.ball_hist.assign(static_cast<std::size_t>(n) + 1, 0);
                                            long degree_sum = 0;
                                            for (VertexId v = 0; v < n; ++v) {
                                              ++s.degree_hist[adj.degree(v)];
                                              degree_sum += adj.degree(v);
                                              ++s.ball_hist[code_size(ball_code(adj, v, r))];
                                            }
                                            s.mean_degree = static_cast<double>(degree_sum) / n;
                                            s.hub_degree = adj.degree(0);
                                            return s;
                                          });

  std::vector<std::uint64_t> degree_hist(static_cast<std::size_t>(n) + 1, 0), ball_hist(degree_hist);
  double worst_mean = 0.0;
  int hub_min = n;
  for (const auto& s : stats) {
    for (std::size_t k = 0; k < degree_hist.size(); ++k) {
      degree_hist[k] += s.degree_hist[k];
      ball_hist[k] += s.ball_hist[k];
    }
    worst_mean = std::max(worst_mean, std::abs(s.mean_degree - (2.0 * n - 2.0) / n));
    hub_min = std::min(hub_min, s.hub_degree);
  }
  report.add_abs("mean_tree_degree", (2.0 * n - 2.0) / n + worst_mean, (2.0 * n - 2.0) / n, 1e-12);

  const double total = static_cast<double>(config.samples) * n;
  Curve degree_curve{"degree_tail", {"k", "p_at_least_k", "k2_p", "hits"}, {}};
  double worst = 0.0;
  std::uint64_t hits = static_cast<std::uint64_t>(total);
  for (std::size_t k = 1; k < degree_hist.size() && hits > 0; ++k) {
    hits -= degree_hist[k - 1];
    if (hits == 0) break;
    const double p = hits / total;
    const double kk = static_cast<double>(k);
    degree_curve.rows.push_back({kk, p, kk * kk * p, static_cast<double>(hits)});
    if (hits >= config.tol.tail_min_hits) worst = std::max(worst, kk * kk * p);
  }
  report.curves.push_back(std::move(degree_curve));
  report.add_at_most("degree_tail_max_k2p", worst, config.tol.tail_constant);

  Curve ball_curve{"ball_size_tail_r" + std::to_string(r), {"size", "p_at_least_size"}, {}};
  hits = static_cast<std::uint64_t>(total);
  double ball_mean = 0.0;
  for (std::size_t s = 1; s < ball_hist.size(); ++s) ball_mean += static_cast<double>(s) * ball_hist[s];
  for (std::size_t s = 1; s < ball_hist.size() && hits > 0; ++s) {
    hits -= ball_hist[s - 1];
    if (hits == 0) break;
    ball_curve.rows.push_back({static_cast<double>(s), hits / total});
  }
  report.curves.push_back(std::move(ball_curve));
  report.metrics["ball_mean_size_r" + std::to_string(r)] = ball_mean / total;

  if (g.spec && g.spec->family == Family::star_of_cliques) {
    const double d = static_cast<double>(g.spec->param("d"));
    report.add_at_least("hub_degree_min", hub_min, d / 2.0);
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_diameter(const ExperimentConfig& config) {
  const LoadedGraph g = load_graph(config);
  ExperimentReport report = start_report(config, g);

  const auto diameters = [&](const Network& net, std::uint64_t stream) {
    const auto values = run_tasks<double>(config.samples, config.threads, config.seed, stream,
                                          [&](std::size_t, Rng& rng) {
                                            return static_cast<double>(TreeAdjacency(wilson(net, rng)).diameter());
                                          });
    return values;
  };
  const auto summarize = [&](const std::string& tag, const std::vector<double>& values) {
    report.metrics["diameter_mean" + tag] = mean(values);
    report.metrics["diameter_q10" + tag] = quantile(values, 0.1);
    report.metrics["diameter_median" + tag] = quantile(values, 0.5);
    report.metrics["diameter_q90" + tag] = quantile(values, 0.9);
  };

  const Family family = g.spec ? g.spec->family : Family::complete;
  if (g.spec && family == Family::chained_cliques) {
    const long d = g.spec->param("d");
    std::vector<double> means;
    Curve curve{"diameter_vs_m", {"m", "mean", "median"}, {}};
    for (std::size_t i = 0; i < config.chain_counts.size(); ++i) {
      const long m = config.chain_counts[i];
      const Network net = chained_cliques_graph(static_cast<int>(m), static_cast<int>(d));
      const auto values = diameters(net, kTreeStream + i * (kBlock >> 8));
      summarize("_m" + std::to_string(m), values);
      means.push_back(mean(values));
      curve.rows.push_back({static_cast<double>(m), means.back(), quantile(values, 0.5)});
    }
    report.curves.push_back(std::move(curve));
    for (std::size_t i = 1; i < means.size(); ++i) {
      const double linear = static_cast<double>(config.chain_counts[i]) / config.chain_counts[i - 1];
      report.add_within("diameter_ratio_m" + std::to_string(config.chain_counts[i]) + "_over_m" +
                            std::to_string(config.chain_counts[i - 1]),
                        means[i] / means[i - 1], linear / 2.0, linear * 2.0);
    }
    if (means.size() > 2) {
      const double linear = static_cast<double>(config.chain_counts.back()) / config.chain_counts.front();
      report.add_within("diameter_ratio_last_over_first", means.back() / means.front(), 0.625 * linear,
                        1.5 * linear);
    }
    return report;
  }

  const auto values = diameters(g.net, kTreeStream);
  summarize("", values);
  Curve curve{"diameters", {"sample", "diameter"}, {}};
  for (std::size_t i = 0; i < values.size(); ++i) curve.rows.push_back({static_cast<double>(i), values[i]});
  report.curves.push_back(std::move(curve));
  const double n = g.net.vertex_count();
  if (g.spec && family == Family::path) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    report.add_abs("path_diameter_min", *lo, n - 1.0, 0.0);
    report.add_abs("path_diameter_max", *hi, n - 1.0, 0.0);
  } else if (g.spec && family == Family::complete) {
    report.add_within("diameter_over_sqrt_n", mean(values) / std::sqrt(n), 0.5, 5.0);
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_verify_core(const ExperimentConfig& config) {
  const LoadedGraph g = load_graph(config);
  const Network& net = g.net;
  const VertexId n = net.vertex_count();
  if (n > 12) throw InvalidParams("verify_core is limited to graphs with at most 12 vertices");
  if (n < 2) throw InvalidParams("verify_core needs at least 2 vertices");
  ExperimentReport report = start_report(config, g);
  const Tolerances& tol = config.tol;

  const TreeEnumeration trees(net);
  const std::vector<double> law = trees.law();
  report.metrics["spanning_trees"] = static_cast<double>(trees.size());
  report.add_abs("matrix_tree_total_weight", trees.total_weight(), matrix_tree_count(net),
                 tol.identity * std::max(1.0, trees.total_weight()));

  const LaplacianSystem dense(net, SolverKind::dense);
  const LaplacianSystem iterative(net, SolverKind::iterative);
  std::vector<WeightedEdge> edges;
  for (const auto& e : net.edges())
    if (e.u != e.v) edges.push_back(e);

  report.add_abs("foster_identity", foster_sum(net, dense), n - 1.0, tol.identity * n);

  // Kirchhoff, exact: enumeration marginal vs c(e) R(e).
  double kirchhoff_gap = 0.0;
  for (const auto& e : edges) {
    const EdgeKey key(e.u, e.v);
    kirchhoff_gap = std::max(kirchhoff_gap, std::abs(trees.probability_all(std::span(&key, 1)) -
                                                     e.conductance * dense.resistance(e.u, e.v)));
  }
  report.add_abs("kirchhoff_exact_max_gap", kirchhoff_gap, 0.0, tol.identity);

  // Resistance by three routes, metric axioms, Nash-Williams.
  double dense_vs_iter = 0.0, dense_vs_reduced = 0.0, dense_vs_contracted = 0.0;
  double asymmetry = 0.0, diagonal = 0.0, min_offdiag = INFINITY, triangle = 0.0, nash = INFINITY;
  Eigen::MatrixXd res(n, n);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = 0; v < n; ++v) res(u, v) = dense.resistance(u, v);
  for (VertexId u = 0; u < n; ++u) {
    diagonal = std::max(diagonal, std::abs(res(u, u)));
    for (VertexId v = 0; v < n; ++v) {
      asymmetry = std::max(asymmetry, std::abs(res(u, v) - res(v, u)));
      if (u == v) continue;
      min_offdiag = std::min(min_offdiag, res(u, v));
      nash = std::min(nash, res(u, v) - nash_williams_bound(net, u, v));
      for (VertexId w = 0; w < n; ++w) triangle = std::max(triangle, res(u, v) - res(u, w) - res(w, v));
      if (u < v) {
        dense_vs_iter = std::max(dense_vs_iter, std::abs(res(u, v) - iterative.resistance(u, v)));
        const VertexId pair[] = {u, v};
        const Network reduced = reduced_network(net, pair);
        dense_vs_reduced = std::max(dense_vs_reduced, std::abs(res(u, v) - 1.0 / reduced.conductance(0, 1)));
        dense_vs_contracted = std::max(dense_vs_contracted, std::abs(res(u, v) - resistance_pair(net, u, v).value));
      }
    }
  }
  report.add_abs("resistance_dense_vs_iterative", dense_vs_iter, 0.0, tol.cross_method);
  report.add_abs("resistance_dense_vs_schur", dense_vs_reduced, 0.0, tol.cross_method);
  report.add_abs("resistance_dense_vs_single_solve", dense_vs_contracted, 0.0, tol.cross_method);
  report.add_abs("metric_symmetry", asymmetry, 0.0, tol.identity);
  report.add_abs("metric_zero_diagonal", diagonal, 0.0, tol.identity);
  report.add_at_least("metric_positive", min_offdiag, 0.0, 0.0).pass = min_offdiag > 0.0;
  report.add_at_most("metric_triangle_violation", triangle, 0.0, tol.identity);
  report.add_at_least("nash_williams_min_gap", nash, 0.0, tol.identity);

  // Resistance to a set: solver block formula vs contraction.
  double set_gap = 0.0;
  for (VertexId v = 0; v < n; ++v) {
    std::vector<VertexId> set;
    for (VertexId w = 0; w < n; ++w)
      if (w != v && (w + v) % 2 == 0) set.push_back(w);
    if (set.empty()) set.push_back(v == 0 ? 1 : 0);
    set_gap = std::max(set_gap, std::abs(dense.resistance_to_set(v, set) - resistance_to_set(net, v, set).value));
  }
  report.add_abs("resistance_to_set_block_vs_contraction", set_gap, 0.0, tol.cross_method);

  // Rayleigh monotonicity: raising one conductance never raises a resistance;
  // deleting a non-bridge edge never lowers one.
  double raise_violation = 0.0, delete_violation = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::vector<WeightedEdge> stronger(edges), fewer;
    stronger[i].conductance *= 2.0;
    for (std::size_t j = 0; j < edges.size(); ++j)
      if (j != i) fewer.push_back(edges[j]);
    const LaplacianSystem up(Network::build(n, stronger), SolverKind::dense);
    const bool bridge = !edges_connect(n, fewer);
    std::optional<LaplacianSystem> down;
    if (!bridge) down.emplace(Network::build(n, fewer), SolverKind::dense);
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = u + 1; v < n; ++v) {
        raise_violation = std::max(raise_violation, up.resistance(u, v) - res(u, v));
        if (down) delete_violation = std::max(delete_violation, res(u, v) - down->resistance(u, v));
      }
  }
  report.add_at_most("rayleigh_raise_conductance", raise_violation, 0.0, tol.identity);
  report.add_at_most("rayleigh_delete_edge", delete_violation, 0.0, tol.identity);

  // Schur complement keeps every resistance among the terminals.
  double schur_gap = 0.0;
  {
    std::vector<std::vector<VertexId>> terminal_sets;
    std::vector<VertexId> evens, firsts;
    for (VertexId v = 0; v < n; v += 2) evens.push_back(v);
    for (VertexId v = 0; v < std::max<VertexId>(2, n / 2); ++v) firsts.push_back(v);
    if (evens.size() >= 2) terminal_sets.push_back(evens);
    terminal_sets.push_back(firsts);
    for (const auto& set : terminal_sets) {
      const Network reduced = reduced_network(net, set);
      const LaplacianSystem small(reduced, SolverKind::dense);
      for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b)
          schur_gap = std::max(schur_gap, std::abs(small.resistance(static_cast<VertexId>(a), static_cast<VertexId>(b)) -
                                                   res(set[a], set[b])));
    }
  }
  report.add_abs("schur_resistance_preserved", schur_gap, 0.0, tol.cross_method);

  // Green function: grounded inverse vs resistance closed form.
  double green_gap = 0.0;
  for (VertexId a = 0; a < n; ++a) {
    const LaplacianSystem grounded(net, SolverKind::dense, a);
    for (VertexId i = 0; i < n; ++i)
      for (VertexId j = 0; j < n; ++j) {
        if (i == a || j == a) continue;
        const double closed = 0.5 * (res(a, j) + res(a, i) - res(i, j));
        green_gap = std::max(green_gap, std::abs(grounded.green(i, j) - closed));
      }
  }
  report.add_abs("green_inverse_vs_closed_form", green_gap, 0.0, tol.cross_method);

  // Negative correlation, exact over all edge pairs.
  double corr_excess = -INFINITY, pair_gap = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const EdgeKey e(edges[i].u, edges[i].v), f(edges[j].u, edges[j].v);
      const EdgeKey both[] = {e, f};
      const double joint = trees.probability_all(both);
      const double pe = trees.probability_all(std::span(&e, 1)), pf = trees.probability_all(std::span(&f, 1));
      corr_excess = std::max(corr_excess, joint - pe * pf);
      pair_gap = std::max(pair_gap, std::abs(joint - exact_pair_probability(net, e, f)));
    }
  if (edges.size() >= 2) {
    report.add_at_most("negative_correlation_exact_max_excess", corr_excess, 0.0, tol.identity);
    report.add_abs("pair_probability_contraction_vs_enumeration", pair_gap, 0.0, tol.identity);
  }

  // Tuple products: prod R(v_i <-> earlier) equals P(all pattern edges in UST).
  {
    double product_gap = 0.0;
    std::size_t tuples_checked = 0;
    for (const char* code : {"(())", "((()))", "(()())"}) {
      const TreePattern pattern = RootedShape::from_code(code).to_pattern();
      std::vector<VertexId> tuple(pattern.size());
      const auto walk = [&](auto&& self, std::size_t i) -> void {
        if (i == pattern.size()) {
          std::vector<EdgeKey> pattern_edges;
          double weight = 1.0;
          for (std::size_t j = 1; j < pattern.size(); ++j) {
            pattern_edges.emplace_back(tuple[j], tuple[pattern.parent[j]]);
            weight *= net.conductance(tuple[j], tuple[pattern.parent[j]]);
          }
          product_gap = std::max(product_gap, std::abs(weight * resistance_product(dense, tuple) -
                                                       trees.probability_all(pattern_edges)));
          ++tuples_checked;
          return;
        }
        for (const VertexId w : net.neighbors(tuple[pattern.parent[i]])) {
          if (std::find(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(i), w) !=
              tuple.begin() + static_cast<std::ptrdiff_t>(i))
            continue;
          tuple[i] = w;
          self(self, i + 1);
        }
      };
      for (VertexId v = 0; v < n; ++v) {
        tuple[0] = v;
        walk(walk, 1);
      }
    }
    report.metrics["tuples_checked"] = static_cast<double>(tuples_checked);
    report.add_abs("tuple_product_vs_enumeration", product_gap, 0.0, tol.identity);
  }

  // Good-tuple resistance sums against k + 4^k 2k^3 / log d.
  if (net.is_regular() && net.is_simple_unit() && net.degree(0) >= 2) {
    const int d = net.degree(0);
    const double threshold = tol.good_threshold.value_or(std::log(static_cast<double>(d)) / d);
    for (const char* code : {"(())", "((()))", "(()())"}) {
      const RootedShape shape = RootedShape::from_code(code);
      const TreePattern pattern = shape.to_pattern();
      const auto k = static_cast<double>(pattern.size());
      const std::size_t interior = pattern.size() - static_cast<std::size_t>(shape.last_level_count());
      const double sum = good_tuple_resistance_sum(net, dense, pattern, interior, threshold);
      report.add_at_most(std::string("good_tuple_sum:") + code, sum,
                         k + std::pow(4.0, k) * 2.0 * k * k * k / std::log(static_cast<double>(d)));
    }
  }

  // Monte Carlo against the enumeration oracle.
  const std::size_t samples = config.samples;
  const auto wilson_counts = tally_trees(trees, net, samples, config.seed, kTreeStream, config.threads,
                                         [&](Rng& rng) { return wilson(net, rng); });
  const auto aldous_counts = tally_trees(trees, net, samples, config.seed, kAldousStream, config.threads,
                                         [&](Rng& rng) { return aldous_broder(net, rng); });
  const bool per_tree = trees.size() <= 64;
  law_z_checks(report, "wilson_tree", wilson_counts, law, tol, per_tree);
  law_z_checks(report, "aldous_broder_tree", aldous_counts, law, tol, per_tree);
  {
    // Expected TV between two independent empirical laws is about
    // sum sqrt(p(1-p)/(pi N)); the gate is the looser of 0.02 and 3x that.
    double noise = 0.0;
    for (const double p : law) noise += std::sqrt(p * (1.0 - p) / (M_PI * static_cast<double>(samples)));
    report.add_at_most("wilson_vs_aldous_broder_tv", tally_tv(wilson_counts, aldous_counts),
                       std::max(tol.tv_max.value_or(0.02), 3.0 * noise));
  }

  // Kirchhoff, Monte Carlo: edge frequencies in the Wilson tally.
  {
    const double gate = tol.bonferroni ? bonferroni_gate(tol.sigma_gate, edges.size()) : tol.sigma_gate;
    for (const auto& e : edges) {
      const auto idx = net.edge_index(e.u, e.v);
      std::uint64_t hits = 0;
      for (std::size_t t = 0; t < trees.size(); ++t)
        if (trees.masks()[t] >> idx & 1) hits += wilson_counts[t];
      const double p = e.conductance * dense.resistance(e.u, e.v);
      report.add_z("kirchhoff_mc:" + edge_name(e.u, e.v), static_cast<double>(hits) / samples, p,
                   std::sqrt(p * (1.0 - p) / samples), gate);
    }
  }

  // Spatial Markov: condition on one edge in and one edge out.
  if (edges.size() >= 3) {
    const EdgeKey contain(edges.front().u, edges.front().v);
    std::optional<EdgeKey> avoid;
    for (std::size_t i = edges.size(); i-- > 1;) {
      const EdgeKey f(edges[i].u, edges[i].v);
      std::vector<WeightedEdge> rest;
      for (const auto& e : edges)
        if (EdgeKey(e.u, e.v) != f) rest.push_back(e);
      const EdgeKey both[] = {contain, f};
      // Need the event {contain in, f out} to have positive probability.
      if (edges_connect(n, rest) && trees.probability_all(std::span(&contain, 1)) > trees.probability_all(both)) {
        avoid = f;
        break;
      }
    }
    if (avoid) {
      const EdgeKey a[] = {contain}, b[] = {*avoid};
      const ConditionedSampler sampler(net, a, b);
      std::size_t violations = 0;
      const auto counts = tally_trees(trees, net, samples, config.seed, kConditionedStream, config.threads,
                                      [&](Rng& rng) { return sampler.sample(rng); });
      const auto conditional = trees.conditional_law(a, b);
      for (std::size_t t = 0; t < trees.size(); ++t)
        if (conditional[t] == 0.0) violations += counts[t];
      report.notes["spatial_markov_condition"] =
          "contain " + edge_name(contain.u, contain.v) + ", avoid " + edge_name(avoid->u, avoid->v);
      report.add_abs("spatial_markov_support_violations", static_cast<double>(violations), 0.0, 0.0);
      law_z_checks(report, "spatial_markov_tree", counts, conditional, tol, per_tree);
    }
  }

  // Negative correlation by Monte Carlo on the first two edges.
  if (edges.size() >= 2) {
    Rng rng = derive_rng(config.seed, kMiscStream);
    const auto check = negative_correlation_check(net, EdgeKey(edges[0].u, edges[0].v),
                                                  EdgeKey(edges[1].u, edges[1].v),
                                                  std::min<std::size_t>(samples, 200000), rng);
    report.add_at_most("negative_correlation_mc", check.p_both, check.p_e * check.p_f,
                       tol.sigma_gate * check.sigma);
  }

  // Commute time and escape probability between 0 and n-1.
  {
    Rng rng = derive_rng(config.seed, kMiscStream + 1);
    const std::size_t walks = std::min<std::size_t>(samples, 100000);
    const auto commute = commute_time_check(net, 0, n - 1, walks, rng);
    report.add_z("commute_time_mc", commute.observed, commute.predicted, commute.sigma, tol.sigma_gate);
    const auto escape = escape_probability_check(net, 0, n - 1, walks, rng);
    report.add_z("escape_probability_mc", escape.escape_probability, escape.predicted_probability,
                 std::sqrt(escape.predicted_probability * (1.0 - escape.predicted_probability) / walks),
                 tol.sigma_gate);
  }

  // Ball counting bound on sampled trees: with S = {v},
  // P(B(X,r-1) meets S, |B(X,r-1)| <= m, |B(X,r)| <= M) <= r |S| m^{r-2} M / |V|.
  {
    Rng rng = derive_rng(config.seed, kMiscStream + 2);
    double worst = -INFINITY;
    for (int t = 0; t < 50; ++t) {
      const SpanningTree tree = wilson(net, rng);
      const TreeAdjacency adj(tree);
      const auto s = static_cast<VertexId>(uniform_index(rng, static_cast<std::uint64_t>(n)));
      const auto dist = adj.distances(s);
      for (const int r : {2, 3}) {
        for (const int m : {2, 4}) {
          const int big_m = 2 * m;
          std::size_t count = 0;
          for (VertexId x = 0; x < n; ++x)
            if (dist[x] <= r - 1 && code_size(ball_code(adj, x, r - 1)) <= m &&
                code_size(ball_code(adj, x, r)) <= big_m)
              ++count;
          const double bound = r * std::pow(m, r - 2) * big_m / static_cast<double>(n);
          worst = std::max(worst, static_cast<double>(count) / n - bound);
        }
      }
    }
    report.add_at_most("ball_counting_bound_max_excess", worst, 0.0, 1e-12);
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::local_limit: return run_local_limit(config);
    case ExperimentKind::foster: return run_foster_suite(config);
    case ExperimentKind::tail: return run_tail_suite(config);
    case ExperimentKind::diameter: return run_diameter(config);
    case ExperimentKind::verify_core: return run_verify_core(config);
  }
  throw InvalidParams("unknown experiment");
}

}  // namespace ustlocal::harness
