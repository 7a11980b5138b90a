#include "ustlocal/contraction.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "ustlocal/error.hpp"

namespace ustlocal {

namespace {

VertexId find_root(std::vector<VertexId>& parent, VertexId x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

Contraction assemble(const Network& net, std::vector<VertexId>& parent,
                     const std::set<EdgeKey>& removed) {
  const VertexId n = net.vertex_count();
  std::vector<VertexId> class_of_root(static_cast<std::size_t>(n), -1);
  Contraction out{Network::build(1, std::span<const WeightedEdge>{}), {}, {}};
  out.merge_map.resize(static_cast<std::size_t>(n));
  VertexId next = 0;
  for (VertexId v = 0; v < n; ++v) {
    const VertexId r = find_root(parent, v);
    if (class_of_root[r] < 0) class_of_root[r] = next++;
    out.merge_map[v] = class_of_root[r];
  }
  std::map<EdgeKey, double> merged;
  for (const auto& e : net.edges()) {
    if (removed.count(EdgeKey(e.u, e.v))) continue;
    const VertexId a = out.merge_map[e.u], b = out.merge_map[e.v];
    if (a == b) continue;
    const EdgeKey key(a, b);
    merged[key] += e.conductance;
    out.provenance[key].push_back(e);
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(merged.size());
  for (const auto& [key, c] : merged) edges.push_back({key.u, key.v, c});
  out.network = Network::build(next, edges);
  return out;
}

}  // namespace

Contraction contract_delete(const Network& net, std::span<const EdgeKey> contract,
                            std::span<const EdgeKey> remove) {
  const VertexId n = net.vertex_count();
  std::set<EdgeKey> contracted, removed;
  for (const auto& e : contract) {
    if (net.edge_index(e.u, e.v) < 0 || e.u == e.v)
      throw NotAnEdge("(" + std::to_string(e.u) + "," + std::to_string(e.v) + ") in A");
    contracted.insert(e);
  }
  for (const auto& e : remove) {
    if (net.edge_index(e.u, e.v) < 0)
      throw NotAnEdge("(" + std::to_string(e.u) + "," + std::to_string(e.v) + ") in B");
    if (contracted.count(e)) throw InvalidParams("A and B must be disjoint");
    removed.insert(e);
  }

  std::vector<WeightedEdge> kept;
  for (const auto& e : net.edges())
    if (!removed.count(EdgeKey(e.u, e.v))) kept.push_back(e);
  if (!edges_connect(n, kept)) throw DisconnectsGraph("G - B is disconnected");

  std::vector<VertexId> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : contracted) {
    const VertexId a = find_root(parent, e.u), b = find_root(parent, e.v);
    if (a == b) throw CycleInA("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") closes a cycle");
    parent[std::max(a, b)] = std::min(a, b);
  }
  return assemble(net, parent, removed);
}

Contraction merge_vertices(const Network& net, std::span<const VertexId> group) {
  const VertexId n = net.vertex_count();
  std::vector<VertexId> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (const VertexId v : group) {
    if (!net.valid_vertex(v)) throw VertexOutOfRange(std::to_string(v));
    const VertexId a = find_root(parent, group.front()), b = find_root(parent, v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  return assemble(net, parent, {});
}

}  // namespace ustlocal
