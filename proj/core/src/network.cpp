#include "ustlocal/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "ustlocal/error.hpp"

namespace ustlocal {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

bool edges_connect(VertexId vertex_count, std::span<const WeightedEdge> edges) {
  if (vertex_count <= 1) return true;
  DisjointSets sets(static_cast<std::size_t>(vertex_count));
  VertexId components = vertex_count;
  for (const auto& e : edges) {
    if (sets.unite(e.u, e.v)) --components;
  }
  return components == 1;
}

Network Network::build(VertexId vertex_count, std::span<const WeightedEdge> edges) {
  if (vertex_count < 1) throw InvalidParams("vertex_count must be positive");

  std::map<EdgeKey, double> merged;
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= vertex_count || e.v < 0 || e.v >= vertex_count) {
      throw VertexOutOfRange("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") with vertex_count " + std::to_string(vertex_count));
    }
    if (!(e.conductance > 0.0) || !std::isfinite(e.conductance)) {
      throw NonPositiveConductance("edge (" + std::to_string(e.u) + "," +
                                   std::to_string(e.v) + ")");
    }
    merged[EdgeKey(e.u, e.v)] += e.conductance;
  }

  Network net;
  net.vertex_count_ = vertex_count;
  net.edges_.reserve(merged.size());
  for (const auto& [key, c] : merged) net.edges_.push_back({key.u, key.v, c});

  if (!edges_connect(vertex_count, net.edges_)) {
    throw DisconnectedGraph(std::to_string(vertex_count) + " vertices, " +
                            std::to_string(net.edges_.size()) + " edges");
  }

  std::vector<int> deg(static_cast<std::size_t>(vertex_count), 0);
  for (const auto& e : net.edges_) {
    ++deg[e.u];
    if (e.u != e.v) ++deg[e.v];
  }
  net.offset_.assign(static_cast<std::size_t>(vertex_count) + 1, 0);
  for (VertexId v = 0; v < vertex_count; ++v) net.offset_[v + 1] = net.offset_[v] + deg[v];

  const auto slots = static_cast<std::size_t>(net.offset_.back());
  net.neighbor_.resize(slots);
  net.conductance_.resize(slots);
  std::vector<int> fill(net.offset_.begin(), net.offset_.end() - 1);
  // edges_ is sorted by (u, v), so filling in that order yields sorted
  // adjacency only for the "v" side; sort each list afterwards.
  for (const auto& e : net.edges_) {
    net.neighbor_[fill[e.u]] = e.v;
    net.conductance_[fill[e.u]++] = e.conductance;
    if (e.u != e.v) {
      net.neighbor_[fill[e.v]] = e.u;
      net.conductance_[fill[e.v]++] = e.conductance;
    } else {
      ++net.loop_count_;
    }
    if (e.conductance != 1.0) net.unit_ = false;
  }
  std::vector<std::pair<VertexId, double>> scratch;
  for (VertexId v = 0; v < vertex_count; ++v) {
    const int b = net.offset_[v], end = net.offset_[v + 1];
    scratch.clear();
    for (int i = b; i < end; ++i) scratch.emplace_back(net.neighbor_[i], net.conductance_[i]);
    std::sort(scratch.begin(), scratch.end());
    for (int i = b; i < end; ++i) {
      net.neighbor_[i] = scratch[i - b].first;
      net.conductance_[i] = scratch[i - b].second;
    }
  }

  net.cumulative_.resize(slots);
  net.pi_.assign(static_cast<std::size_t>(vertex_count), 0.0);
  for (VertexId v = 0; v < vertex_count; ++v) {
    double acc = 0.0;
    for (int i = net.offset_[v]; i < net.offset_[v + 1]; ++i) {
      acc += net.conductance_[i];
      net.cumulative_[i] = acc;
    }
    net.pi_[v] = acc;
  }
  net.pi_cumulative_.resize(static_cast<std::size_t>(vertex_count));
  double acc = 0.0;
  for (VertexId v = 0; v < vertex_count; ++v) {
    acc += net.pi_[v];
    net.pi_cumulative_[v] = acc;
  }
  net.total_pi_ = acc;
  return net;
}

Network Network::build(VertexId vertex_count,
                       std::span<const std::pair<VertexId, VertexId>> edges) {
  std::vector<WeightedEdge> weighted;
  weighted.reserve(edges.size());
  for (const auto& [u, v] : edges) weighted.push_back({u, v, 1.0});
  return build(vertex_count, weighted);
}

double Network::loop_conductance(VertexId v) const noexcept { return conductance(v, v); }

double Network::conductance(VertexId u, VertexId v) const noexcept {
  if (!valid_vertex(u) || !valid_vertex(v)) return 0.0;
  const auto nbrs = neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return conductance_[offset_[u] + (it - nbrs.begin())];
}

bool Network::is_regular() const noexcept {
  for (VertexId v = 1; v < vertex_count_; ++v) {
    if (degree(v) != degree(0)) return false;
  }
  return true;
}

std::ptrdiff_t Network::edge_index(VertexId u, VertexId v) const noexcept {
  const EdgeKey key(u, v);
  const auto it = std::lower_bound(
      edges_.begin(), edges_.end(), key,
      [](const WeightedEdge& e, const EdgeKey& k) { return EdgeKey(e.u, e.v) < k; });
  if (it == edges_.end() || it->u != key.u || it->v != key.v) return -1;
  return it - edges_.begin();
}

VertexId Network::step(VertexId from, Rng& rng) const noexcept {
  const int b = offset_[from];
  const int deg = offset_[from + 1] - b;
  if (unit_) return neighbor_[b + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(deg)))];
  const double target = uniform01(rng) * pi_[from];
  const auto first = cumulative_.begin() + b;
  auto it = std::upper_bound(first, first + deg, target);
  if (it == first + deg) --it;
  return neighbor_[b + (it - first)];
}

VertexId Network::stationary_vertex(Rng& rng) const noexcept {
  const double target = uniform01(rng) * total_pi_;
  auto it = std::upper_bound(pi_cumulative_.begin(), pi_cumulative_.end(), target);
  if (it == pi_cumulative_.end()) --it;
  return static_cast<VertexId>(it - pi_cumulative_.begin());
}

}  // namespace ustlocal
