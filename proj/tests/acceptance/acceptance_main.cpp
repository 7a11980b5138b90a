// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bridge.hpp"
#include "oracles.hpp"
#include "ustlocal/census.hpp"
#include "ustlocal/electric.hpp"
#include "ustlocal/generators.hpp"
#include "ustlocal/harness/experiments.hpp"
#include "ustlocal/harness/parallel.hpp"
#include "ustlocal/laplacian.hpp"
#include "ustlocal/limit_law.hpp"
#include "ustlocal/pgw.hpp"
#include "ustlocal/rooted_shape.hpp"
#include "ustlocal/samplers.hpp"
#include "ustlocal/spanning_tree.hpp"

using namespace ustlocal;
using namespace ustlocal::harness;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr std::uint64_t kBlock = std::uint64_t{1} << 40;
constexpr unsigned kThreads = 0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

GraphSpec spec(Family family, std::map<std::string, long> params) { return {family, std::move(params)}; }

ExperimentConfig base_config(ExperimentKind kind, GraphSpec graph, std::size_t samples) {
  ExperimentConfig config;
  config.kind = kind;
  config.graph = std::move(graph);
  config.samples = samples;
  config.seed = kSeed;
  config.threads = kThreads;
  return config;
}

// Sorted oracle edge indices of a sampled tree.
std::vector<int> tree_key(const oracle::Graph& g, const SpanningTree& tree) {
  std::map<std::pair<int, int>, int> index;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    index[{std::min(g.edges[i].first, g.edges[i].second), std::max(g.edges[i].first, g.edges[i].second)}] =
        static_cast<int>(i);
  std::vector<int> key;
  for (const EdgeKey& e : tree.edges()) key.push_back(index.at({e.u, e.v}));
  std::sort(key.begin(), key.end());
  return key;
}

// Tree frequencies over `samples` draws keyed by oracle tree.
template <class Draw>
std::map<std::vector<int>, double> tree_frequencies(const oracle::Graph& g, std::size_t samples, Draw&& draw) {
  std::map<std::vector<int>, double> freq;
  for (std::size_t i = 0; i < samples; ++i) freq[tree_key(g, draw())] += 1.0;
  for (auto& [key, f] : freq) f /= static_cast<double>(samples);
  return freq;
}

// r=1 TV computed from tree degrees alone: a vertex of tree degree k has the
// ball "root with k children", whose limit mass is e^-1/(k-1)!.
double degree_tv(const std::vector<SpanningTree>& trees) {
  std::map<int, double> freq;
  double total = 0.0;
  for (const auto& t : trees) {
    const TreeAdjacency adj(t);
    for (VertexId v = 0; v < adj.vertex_count(); ++v) freq[adj.degree(v)] += 1.0;
    total += adj.vertex_count();
  }
  double tv = 0.0, seen_mass = 0.0;
  for (const auto& [k, f] : freq) {
    const double p = std::exp(-1.0 - std::lgamma(static_cast<double>(k)));
    tv += std::abs(f / total - p);
    seen_mass += p;
  }
  tv += 1.0 - seen_mass;  // limit mass on degrees never observed
  return tv / 2.0;
}

double leaf_fraction(const std::vector<SpanningTree>& trees) {
  double leaves = 0.0, total = 0.0;
  for (const auto& t : trees) {
    const TreeAdjacency adj(t);
    for (VertexId v = 0; v < adj.vertex_count(); ++v) leaves += adj.degree(v) == 1;
    total += adj.vertex_count();
  }
  return leaves / total;
}

// ---------------------------------------------------------------------------

Outcome foster_identity() {
  Outcome out;
  Rng rng = derive_rng(kSeed, 0);
  const std::vector<std::pair<std::string, Network>> graphs{
      {"K4", complete_graph(4)},
      {"K3,3", complete_bipartite_graph(3, 3)},
      {"C5", cycle_graph(5)},
      {"rr(200,10)", random_regular_graph(200, 10, rng)},
      {"Q8", hypercube_graph(8)},
      {"chained(4,10)", chained_cliques_graph(4, 10)}};
  double worst = 0.0;
  for (const auto& [name, net] : graphs) {
    const double n = net.vertex_count();
    const double gap = std::abs(foster_sum(net) - (n - 1.0));
    worst = std::max(worst, gap / n);
    out.require(gap <= 1e-9 * n, name + " gap " + fmt(gap));
  }
  out.detail << "max |sum c R - (n-1)| / n = " << fmt(worst) << " over 6 graphs";
  return out;
}

Outcome kirchhoff() {
  Outcome out;
  constexpr std::size_t kSamples = 1'000'000;
  double worst_z = 0.0;
  std::uint64_t stream = kBlock;
  for (const Network& net : {complete_graph(4), cycle_graph(5)}) {
    const auto g = testing_bridge::to_oracle(net);
    const auto lplus = oracle::pseudo_inverse(oracle::laplacian(g));
    std::vector<double> hits(net.edge_count(), 0.0);
    Rng rng = derive_rng(kSeed, stream++);
    for (std::size_t s = 0; s < kSamples; ++s) {
      const SpanningTree t = wilson(net, rng);
      for (std::size_t i = 0; i < net.edges().size(); ++i)
        hits[i] += t.contains(net.edges()[i].u, net.edges()[i].v);
    }
    for (std::size_t i = 0; i < net.edges().size(); ++i) {
      const auto& e = net.edges()[i];
      const double p = e.conductance * resistance_pair(net, e.u, e.v).value;
      out.require(std::abs(p - oracle::resistance(lplus, e.u, e.v)) < 1e-12, "solver vs pseudo-inverse");
      const double sigma = std::sqrt(p * (1 - p) / kSamples);
      const double z = std::abs(hits[i] / kSamples - p) / sigma;
      worst_z = std::max(worst_z, z);
      out.require(z <= 4.0, "edge z " + fmt(z));
    }
  }
  out.detail << "K4, C5 at 1e6 Wilson samples: max |z| = " << fmt(worst_z);
  return out;
}

Outcome sampler_cross_validation() {
  Outcome out;
  constexpr std::size_t kSamples = 1'000'000;
  const Network k4 = complete_graph(4);
  const auto g = testing_bridge::to_oracle(k4);
  const auto trees = oracle::spanning_trees(g);
  out.require(trees.size() == 16, "K4 has 16 spanning trees");
  Rng wr = derive_rng(kSeed, 2 * kBlock), ar = derive_rng(kSeed, 2 * kBlock + 1);
  const auto wf = tree_frequencies(g, kSamples, [&] { return wilson(k4, wr); });
  const auto af = tree_frequencies(g, kSamples, [&] { return aldous_broder(k4, ar); });
  const double p = 1.0 / static_cast<double>(trees.size());
  const double sigma = std::sqrt(p * (1 - p) / kSamples);
  double tv = 0.0, worst_z = 0.0;
  for (const auto& t : trees) {
    const double w = wf.count(t) ? wf.at(t) : 0.0, a = af.count(t) ? af.at(t) : 0.0;
    tv += std::abs(w - a);
    worst_z = std::max({worst_z, std::abs(w - p) / sigma, std::abs(a - p) / sigma});
  }
  tv /= 2.0;
  out.require(wf.size() == 16 && af.size() == 16, "samples outside the 16 trees");
  out.require(tv < 0.02, "TV " + fmt(tv));
  out.require(worst_z <= 4.0, "per-tree z " + fmt(worst_z));
  out.detail << "TV(Wilson, AB) = " << fmt(tv) << ", max per-tree |z| = " << fmt(worst_z);
  return out;
}

Outcome spatial_markov() {
  Outcome out;
  constexpr std::size_t kSamples = 400'000;
  const Network k4 = complete_graph(4);
  const auto g = testing_bridge::to_oracle(k4);
  const EdgeKey contain[] = {{0, 1}};
  const EdgeKey avoid[] = {{2, 3}};
  // Brute-force conditional law: uniform on trees with 0-1 and without 2-3.
  std::set<std::vector<int>> support;
  for (const auto& t : oracle::spanning_trees(g)) {
    bool has01 = false, has23 = false;
    for (const int e : t) {
      const auto [a, b] = g.edges[e];
      has01 |= (std::min(a, b) == 0 && std::max(a, b) == 1);
      has23 |= (std::min(a, b) == 2 && std::max(a, b) == 3);
    }
    if (has01 && !has23) support.insert(t);
  }
  const ConditionedSampler sampler(k4, contain, avoid);
  Rng rng = derive_rng(kSeed, 3 * kBlock);
  const auto freq = tree_frequencies(g, kSamples, [&] { return sampler.sample(rng); });
  const double p = 1.0 / static_cast<double>(support.size());
  const double sigma = std::sqrt(p * (1 - p) / kSamples);
  double worst_z = 0.0;
  for (const auto& [key, f] : freq) out.require(support.count(key) == 1, "tree outside the event");
  for (const auto& t : support) worst_z = std::max(worst_z, std::abs((freq.count(t) ? freq.at(t) : 0.0) - p) / sigma);
  out.require(worst_z <= 4.0, "per-tree z " + fmt(worst_z));
  out.detail << support.size() << " trees in the event, max per-tree |z| = " << fmt(worst_z) << " at "
             << kSamples << " samples";
  return out;
}

Outcome stabilizer_identity() {
  Outcome out;
  std::size_t arrays = 0, mismatches = 0;
  std::set<std::string> codes;
  oracle::for_each_parent_array(8, [&](const std::vector<int>& parent) {
    ++arrays;
    const RootedShape shape = RootedShape::from_parents(parent);
    codes.insert(shape.code());
    if (shape.stab_order() != BigInt(oracle::automorphisms(parent))) ++mismatches;
  });
  const auto counts = oracle::rooted_tree_counts(8);
  std::uint64_t classes = 0;
  for (int n = 1; n <= 8; ++n) classes += counts[n];
  out.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  out.require(codes.size() == classes, "isomorphism classes covered");
  out.require(enumerate_shapes(8).size() == classes, "enumerate_shapes count");
  out.detail << arrays << " labeled trees in " << codes.size() << " classes (expected " << classes
             << "), mismatches = " << mismatches;
  return out;
}

Outcome normalization() {
  Outcome out;
  double r1 = 0.0;
  std::vector<RootedShape> leaves;
  for (int k = 1; k <= 12; ++k) {
    leaves.emplace_back();
    r1 += limit_prob_conditioned(RootedShape::join(leaves), 1);
  }
  out.require(r1 >= 1.0 - 1e-8, "r=1 sum " + fmt(r1));
  const LimitLaw law = unconditional_law(2, 14);
  out.require(law.covered_mass >= 0.995, "r=2 covered " + fmt(law.covered_mass));
  // Tail beyond 14 vertices measured on sampled branching-process balls.
  constexpr std::size_t kSamples = 1'000'000;
  Rng rng = derive_rng(kSeed, 4 * kBlock);
  std::size_t big = 0;
  for (std::size_t i = 0; i < kSamples; ++i) big += sample_pgw(rng, 2).size() > 14;
  const double tail = static_cast<double>(big) / kSamples;
  const double sigma = std::sqrt(std::max(tail * (1 - tail), 1e-12) / kSamples);
  const double missing = 1.0 - law.covered_mass;
  out.require(std::abs(missing - tail) <= 4.0 * sigma, "tail mismatch");
  out.detail << "r=1 sum(k<=12) = 1 - " << fmt(1.0 - r1) << "; r=2 <=14 vertices = " << fmt(law.covered_mass)
             << ", missing " << fmt(missing) << " vs sampled tail " << fmt(tail) << " +- " << fmt(sigma);
  return out;
}

Outcome local_limit() {
  Outcome out;
  // K_200, r = 1, all vertices tallied.
  {
    auto config = base_config(ExperimentKind::local_limit, spec(Family::complete, {{"n", 200}}), 50);
    config.radius = 1;
    config.tol.tv_max = 0.02;
    config.tol.leaf_tolerance = 0.01;
    const auto report = run_local_limit(config);
    const double tv = report.find("tv_conditioned")->observed;
    const double leaf = report.find("leaf_fraction")->observed;
    const auto trees = sample_trees(complete_graph(200), 50, kSeed, 5 * kBlock, kThreads);
    const double tv_deg = degree_tv(trees), leaf_deg = leaf_fraction(trees);
    out.require(tv < 0.02 && tv_deg < 0.02, "K200 TV");
    out.require(std::abs(leaf - std::exp(-1.0)) <= 0.01 && std::abs(leaf_deg - std::exp(-1.0)) <= 0.01,
                "K200 leaf fraction");
    out.detail << "K200: TV " << fmt(tv) << " (degree route " << fmt(tv_deg) << "), leaf " << fmt(leaf)
               << " (degree route " << fmt(leaf_deg) << "); ";
  }
  // random_regular(2000, d), r = 2, 20 samples.
  std::vector<double> tvs;
  for (const long d : {10L, 25L, 50L}) {
    auto config = base_config(ExperimentKind::local_limit, spec(Family::random_regular, {{"n", 2000}, {"d", d}}), 20);
    config.radius = 2;
    tvs.push_back(run_local_limit(config).find("tv_conditioned")->observed);
  }
  out.require(tvs[2] < 0.06, "rr(2000,50) TV");
  out.require(tvs[0] > tvs[1] && tvs[1] > tvs[2], "TV not decreasing in d");
  out.detail << "rr(2000,d) r=2 TV for d=10,25,50: " << fmt(tvs[0]) << ", " << fmt(tvs[1]) << ", " << fmt(tvs[2]);
  return out;
}

Outcome quenched() {
  Outcome out;
  Rng graph_rng = derive_rng(kSeed, 0);
  const Network net = random_regular_graph(2000, 50, graph_rng);
  const auto trees = sample_trees(net, 20, kSeed, 6 * kBlock, kThreads);
  int inside = 0;
  double lo = INFINITY, hi = 0.0;
  for (const auto& t : trees) {
    // The single-edge shape at r=1 is exactly a leaf.
    const double ratio = leaf_fraction({t}) / std::exp(-1.0);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    inside += ratio >= 0.93 && ratio <= 1.07;
  }
  auto config = base_config(ExperimentKind::local_limit, spec(Family::random_regular, {{"n", 2000}, {"d", 50}}), 20);
  config.tol.quenched_min_fraction = 0.9;
  const double harness_fraction = run_local_limit(config).find("quenched_within_band_fraction")->observed;
  out.require(inside >= 18, "only " + std::to_string(inside) + " of 20");
  out.require(harness_fraction >= 0.9, "harness fraction " + fmt(harness_fraction));
  out.detail << inside << "/20 samples with Y/(n e^-1) in [0.93,1.07] (range " << fmt(lo) << ".." << fmt(hi)
             << "); census route " << fmt(harness_fraction);
  return out;
}

Outcome regularity_needed() {
  Outcome out;
  auto config = base_config(ExperimentKind::local_limit, spec(Family::complete_bipartite, {{"a", 100}, {"b", 200}}), 50);
  const double tv = run_local_limit(config).find("tv_conditioned")->observed;
  const auto trees = sample_trees(complete_bipartite_graph(100, 200), 50, kSeed, 7 * kBlock, kThreads);
  const double tv_deg = degree_tv(trees);
  out.require(tv > 0.01 && tv_deg > 0.01, "TV too small");
  out.detail << "K(100,200) r=1 TV = " << fmt(tv) << " (degree route " << fmt(tv_deg) << ")";
  return out;
}

Outcome survival() {
  Outcome out;
  // Independent recursion in long double, compared at checkpoints.
  long double p = 1.0L;
  double previous = 0.0;
  bool increasing = true;
  for (long n = 1; n <= 100000; ++n) {
    p = 1.0L - std::exp(-p);
    const double np = static_cast<double>(n * p);
    increasing &= np > previous;
    previous = np;
    if (n == 10 || n == 100 || n == 1000 || n == 10000 || n == 100000)
      out.require(std::abs(survival_prob(n) - static_cast<double>(p)) <= 1e-12 * static_cast<double>(p),
                  "recursion mismatch at " + std::to_string(n));
  }
  const double at = 1e4 * survival_prob(10000);
  out.require(at >= 1.9 && at <= 2.0, "n p_n = " + fmt(at));
  out.require(increasing, "n p_n not increasing");
  out.detail << "n p_n at 1e4 = " << fmt(at) << ", at 1e5 = " << fmt(1e5 * survival_prob(100000))
             << ", increasing on [1, 1e5]";
  return out;
}

Outcome tuple_concentration() {
  Outcome out;
  const Network net = complete_graph(501);
  const LaplacianSystem system(net);
  const TreePattern path = RootedShape::from_code("((()))").to_pattern();
  constexpr int d = 500;
  constexpr std::size_t kTuples = 10'000;
  const auto chunks = make_chunks(kTuples, 500);
  const auto parts = run_tasks<std::vector<TupleRecord>>(
      chunks.size(), kThreads, kSeed, 8 * kBlock, [&](std::size_t i, Rng& rng) {
        return tuple_resistance_experiment(net, system, path, chunks[i].end - chunks[i].begin, rng,
                                           {d, kTupleBandConstant, TupleStart::uniform});
      });
  // Band recomputed here: center 3/(2d), half-width 72 * 3 * log^3 d / d^2.
  const double l = std::log(static_cast<double>(d));
  const double center = 3.0 / (2.0 * d), half = 72.0 * 3.0 * l * l * l / (1.0 * d * d);
  std::size_t inside = 0, total = 0;
  for (const auto& part : parts)
    for (const auto& rec : part) {
      ++total;
      inside += rec.compatible && std::abs(rec.resistance - center) <= half;
    }
  const double fraction = static_cast<double>(inside) / total;
  const double needed = 1.0 - 2.0 * 27.0 / (l * l * l);
  out.require(total == kTuples, "tuple count");
  out.require(fraction >= needed, "fraction " + fmt(fraction));
  out.detail << "fraction in band " << fmt(fraction) << " >= " << fmt(needed);
  return out;
}

Outcome property_suites() {
  Outcome out;
  std::vector<std::string> failures;
  std::size_t gated = 0;
  const auto absorb = [&](const ExperimentReport& report, const std::string& label) {
    for (const auto& r : report.records) {
      gated += r.gated;
      if (r.gated && !r.pass) failures.push_back(label + ":" + r.name);
    }
  };
  for (const auto& [label, graph] : std::vector<std::pair<std::string, GraphSpec>>{
           {"K4", spec(Family::complete, {{"n", 4}})},
           {"C5", spec(Family::cycle, {{"n", 5}})},
           {"K3,3", spec(Family::complete_bipartite, {{"a", 3}, {"b", 3}})},
           {"Q3", spec(Family::hypercube, {{"dim", 3}})}}) {
    auto config = base_config(ExperimentKind::verify_core, graph, 200'000);
    absorb(run_verify_core(config), "verify " + label);
  }
  for (const auto& [label, graph] : std::vector<std::pair<std::string, GraphSpec>>{
           {"K101", spec(Family::complete, {{"n", 101}})},
           {"rr(1000,30)", spec(Family::random_regular, {{"n", 1000}, {"d", 30}})},
           {"Q8", spec(Family::hypercube, {{"dim", 8}})}}) {
    auto config = base_config(ExperimentKind::foster, graph, 0);
    config.tuples = 2000;
    absorb(run_foster_suite(config), "foster " + label);
  }
  for (const auto& f : failures) out.require(false, f);
  out.detail << gated << " gated checks across verify (K4, C5, K3,3, Q3) and foster (K101, rr(1000,30), Q8), "
             << failures.size() << " failed";
  return out;
}

Outcome degree_tail() {
  Outcome out;
  for (const auto& [label, graph] : std::vector<std::pair<std::string, GraphSpec>>{
           {"K500", spec(Family::complete, {{"n", 500}})},
           {"rr(1000,30)", spec(Family::random_regular, {{"n", 1000}, {"d", 30}})}}) {
    auto config = base_config(ExperimentKind::tail, graph, 200);
    const double worst = run_tail_suite(config).find("degree_tail_max_k2p")->observed;
    out.require(worst <= 20.0, label + " k^2 P = " + fmt(worst));
    out.detail << label << " max k^2 P(deg >= k) = " << fmt(worst) << "; ";
  }
  // Hub of the star of cliques: every spanning tree must use one of the two
  // hub edges into each clique copy, so the hub keeps degree >= d/2.
  constexpr int d = 20;
  const Network soc = star_of_cliques_graph(d);
  const auto trees = sample_trees(soc, 500, kSeed, 9 * kBlock, kThreads);
  int hub_min = d;
  for (const auto& t : trees) hub_min = std::min(hub_min, TreeAdjacency(t).degree(0));
  out.require(hub_min >= d / 2, "hub degree " + std::to_string(hub_min));
  out.detail << "star_of_cliques(20) min hub degree over 500 trees = " << hub_min;
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"foster_identity", foster_identity},
      {"kirchhoff_edge_frequencies", kirchhoff},
      {"wilson_vs_aldous_broder", sampler_cross_validation},
      {"conditioned_sampler_law", spatial_markov},
      {"stabilizer_order_exhaustive", stabilizer_identity},
      {"limit_law_normalization", normalization},
      {"local_limit_convergence", local_limit},
      {"quenched_leaf_counts", quenched},
      {"non_regular_separation", regularity_needed},
      {"survival_asymptotic", survival},
      {"tuple_resistance_band", tuple_concentration},
      {"property_suites", property_suites},
      {"degree_tail_and_hub", degree_tail},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail << "exception: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !outcome.pass;
    std::printf("%s %2zu %-28s %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                outcome.detail.str().c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
