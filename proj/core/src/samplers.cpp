#include "ustlocal/samplers.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "ustlocal/error.hpp"

namespace ustlocal {

namespace {

std::atomic<std::size_t> audit_counter{0};

void audit(const SpanningTree& tree, const Network& net) {
#ifdef NDEBUG
  if (audit_counter.fetch_add(1, std::memory_order_relaxed) % kReleaseAuditPeriod != 0) return;
#endif
  tree.validate(net);
}

void require_edge(const Network& net, EdgeKey e) {
  if (e.u == e.v || net.edge_index(e.u, e.v) < 0)
    throw NotAnEdge("(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
}

}  // namespace

SpanningTree wilson(const Network& net, Rng& rng, VertexId root) {
  const VertexId n = net.vertex_count();
  if (!net.valid_vertex(root)) throw VertexOutOfRange("wilson root");
  std::vector<VertexId> next(static_cast<std::size_t>(n), -1);
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  in_tree[root] = 1;
  for (VertexId start = 0; start < n; ++start) {
    // Overwriting next[] on revisits keeps only the last exit from each
    // vertex, which is exactly the loop-erased path once the tree is hit.
    VertexId u = start;
    while (!in_tree[u]) {
      next[u] = net.step(u, rng);
      u = next[u];
    }
    for (u = start; !in_tree[u]; u = next[u]) in_tree[u] = 1;
  }
  next[root] = -1;
  SpanningTree tree(root, std::move(next));
  audit(tree, net);
  return tree;
}

SpanningTree aldous_broder(const Network& net, Rng& rng) {
  const VertexId n = net.vertex_count();
  std::vector<VertexId> parent(static_cast<std::size_t>(n), -2);
  parent[0] = -1;
  VertexId remaining = n - 1;
  VertexId at = 0;
  while (remaining > 0) {
    const VertexId to = net.step(at, rng);
    if (parent[to] == -2) {
      parent[to] = at;
      --remaining;
    }
    at = to;
  }
  SpanningTree tree(0, std::move(parent));
  audit(tree, net);
  return tree;
}

MonteCarloComparison edge_probability_check(const Network& net, EdgeKey e, std::size_t samples,
                                            Rng& rng) {
  require_edge(net, e);
  if (samples == 0) throw InvalidParams("samples must be positive");
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s)
    if (wilson(net, rng).contains(e.u, e.v)) ++hits;
  MonteCarloComparison out;
  out.samples = samples;
  out.observed = static_cast<double>(hits) / samples;
  out.predicted = std::min(1.0, net.conductance(e.u, e.v) * resistance_pair(net, e.u, e.v).value);
  out.sigma = std::sqrt(out.predicted * (1.0 - out.predicted) / samples);
  out.z = out.sigma > 0.0 ? (out.observed - out.predicted) / out.sigma : 0.0;
  return out;
}

ConditionedSampler::ConditionedSampler(const Network& net, std::span<const EdgeKey> contain,
                                       std::span<const EdgeKey> avoid)
    : vertex_count_(net.vertex_count()),
      contain_(contain.begin(), contain.end()),
      contraction_(contract_delete(net, contain, avoid)) {}

SpanningTree ConditionedSampler::sample(Rng& rng) const {
  const SpanningTree small = wilson(contraction_.network, rng);
  std::vector<EdgeKey> edges(contain_);
  edges.reserve(static_cast<std::size_t>(vertex_count_) - 1);
  for (const EdgeKey& e : small.edges()) {
    const auto& originals = contraction_.provenance.at(e);
    std::size_t pick = 0;
    if (originals.size() > 1) {
      double total = 0.0;
      for (const auto& o : originals) total += o.conductance;
      double x = uniform01(rng) * total;
      while (pick + 1 < originals.size() && x >= originals[pick].conductance)
        x -= originals[pick++].conductance;
    }
    edges.emplace_back(originals[pick].u, originals[pick].v);
  }
  return SpanningTree::from_edges(vertex_count_, edges, 0);
}

SpanningTree sample_conditioned(const Network& net, std::span<const EdgeKey> contain,
                                std::span<const EdgeKey> avoid, Rng& rng) {
  const ConditionedSampler sampler(net, contain, avoid);
  SpanningTree tree = sampler.sample(rng);
  audit(tree, net);
  return tree;
}

bool CorrelationCheck::holds(double sigmas) const { return p_both <= p_e * p_f + sigmas * sigma; }

double exact_pair_probability(const Network& net, EdgeKey e, EdgeKey f) {
  require_edge(net, e);
  require_edge(net, f);
  if (e == f) throw InvalidParams("pair probability needs distinct edges");
  const double p_e = net.conductance(e.u, e.v) * resistance_pair(net, e.u, e.v).value;
  const EdgeKey only[] = {e};
  const Contraction c = contract_delete(net, only, {});
  const VertexId a = c.merge_map[f.u], b = c.merge_map[f.v];
  if (a == b) return 0.0;  // f parallel to e can't join it in a tree
  return p_e * net.conductance(f.u, f.v) * resistance_pair(c.network, a, b).value;
}

CorrelationCheck negative_correlation_check(const Network& net, EdgeKey e, EdgeKey f,
                                            std::size_t samples, Rng& rng) {
  require_edge(net, e);
  require_edge(net, f);
  if (e == f) throw InvalidParams("negative correlation needs distinct edges");
  if (samples == 0) throw InvalidParams("samples must be positive");
  std::size_t both = 0, only_e = 0, only_f = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const SpanningTree t = wilson(net, rng);
    const bool in_e = t.contains(e.u, e.v), in_f = t.contains(f.u, f.v);
    both += in_e && in_f;
    only_e += in_e;
    only_f += in_f;
  }
  CorrelationCheck out;
  out.samples = samples;
  out.p_both = static_cast<double>(both) / samples;
  out.p_e = static_cast<double>(only_e) / samples;
  out.p_f = static_cast<double>(only_f) / samples;
  out.exact_both = exact_pair_probability(net, e, f);
  out.exact_product = net.conductance(e.u, e.v) * resistance_pair(net, e.u, e.v).value *
                      net.conductance(f.u, f.v) * resistance_pair(net, f.u, f.v).value;
  // Standard error at the larger of the two candidate values keeps the slack
  // honest when the empirical count is tiny.
  const double p = std::max(out.p_both, out.exact_product);
  out.sigma = std::sqrt(std::max(0.0, p * (1.0 - p)) / samples);
  return out;
}

}  // namespace ustlocal
