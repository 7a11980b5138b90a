#include "ustlocal/spanning_tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ustlocal/error.hpp"

namespace ustlocal {

SpanningTree::SpanningTree(VertexId root, std::vector<VertexId> parent)
    : root_(root), parent_(std::move(parent)) {
  if (root_ < 0 || root_ >= vertex_count()) throw VertexOutOfRange("tree root");
}

SpanningTree SpanningTree::from_edges(VertexId vertex_count, std::span<const EdgeKey> edges,
                                      VertexId root) {
  if (vertex_count < 1 || root < 0 || root >= vertex_count)
    throw InvalidParams("from_edges: bad vertex count or root");
  if (edges.size() != static_cast<std::size_t>(vertex_count - 1))
    throw InvalidParams("from_edges: expected n-1 edges, got " + std::to_string(edges.size()));
  std::vector<int> degree(static_cast<std::size_t>(vertex_count) + 1, 0);
  for (const auto& e : edges) {
    if (e.u < 0 || e.v >= vertex_count || e.u == e.v) throw InvalidParams("from_edges: bad edge");
    ++degree[e.u + 1];
    ++degree[e.v + 1];
  }
  std::partial_sum(degree.begin(), degree.end(), degree.begin());
  std::vector<VertexId> adj(2 * edges.size());
  std::vector<int> fill(degree.begin(), degree.end() - 1);
  for (const auto& e : edges) {
    adj[fill[e.u]++] = e.v;
    adj[fill[e.v]++] = e.u;
  }
  std::vector<VertexId> parent(static_cast<std::size_t>(vertex_count), -2);
  parent[root] = -1;
  std::vector<VertexId> stack{root};
  VertexId reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (int i = degree[v]; i < degree[v + 1]; ++i) {
      const VertexId w = adj[i];
      if (w == parent[v]) continue;
      if (parent[w] != -2) throw InvalidParams("from_edges: edges contain a cycle");
      parent[w] = v;
      ++reached;
      stack.push_back(w);
    }
  }
  if (reached != vertex_count) throw InvalidParams("from_edges: edges do not span");
  return SpanningTree(root, std::move(parent));
}

std::vector<EdgeKey> SpanningTree::edges() const {
  std::vector<EdgeKey> out;
  out.reserve(parent_.size());
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (v != root_) out.emplace_back(v, parent_[v]);
  std::sort(out.begin(), out.end());
  return out;
}

void SpanningTree::validate(const Network& net) const {
  const VertexId n = vertex_count();
  if (n != net.vertex_count()) throw InvalidParams("tree has wrong vertex count");
  if (parent_[root_] != -1) throw InvalidParams("root has a parent");
  for (VertexId v = 0; v < n; ++v) {
    if (v == root_) continue;
    const VertexId p = parent_[v];
    if (p < 0 || p >= n || p == v) throw InvalidParams("bad parent at " + std::to_string(v));
    if (!net.adjacent(v, p))
      throw InvalidParams("tree edge (" + std::to_string(v) + "," + std::to_string(p) + ") not in network");
  }
  // Every vertex must reach the root; colors: 0 unseen, 1 on current path, 2 done.
  std::vector<char> state(static_cast<std::size_t>(n), 0);
  state[root_] = 2;
  std::vector<VertexId> path;
  for (VertexId v = 0; v < n; ++v) {
    VertexId x = v;
    path.clear();
    while (state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = parent_[x];
    }
    if (state[x] == 1) throw InvalidParams("parent pointers contain a cycle");
    for (const VertexId y : path) state[y] = 2;
  }
}

bool SpanningTree::is_valid(const Network& net) const {
  try {
    validate(net);
    return true;
  } catch (const InvalidParams&) {
    return false;
  }
}

std::uint64_t SpanningTree::edge_mask(const Network& net) const {
  if (net.edge_count() > 64) throw LimitExceeded("edge_mask needs at most 64 edges");
  std::uint64_t mask = 0;
  for (VertexId v = 0; v < vertex_count(); ++v) {
    if (v == root_) continue;
    const auto idx = net.edge_index(v, parent_[v]);
    if (idx < 0) throw NotAnEdge("tree edge missing from network");
    mask |= std::uint64_t{1} << idx;
  }
  return mask;
}

TreeAdjacency::TreeAdjacency(const SpanningTree& tree) {
  const VertexId n = tree.vertex_count();
  const auto& parent = tree.parent();
  offset_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (VertexId v = 0; v < n; ++v)
    if (v != tree.root()) {
      ++offset_[v + 1];
      ++offset_[parent[v] + 1];
    }
  std::partial_sum(offset_.begin(), offset_.end(), offset_.begin());
  neighbor_.resize(static_cast<std::size_t>(offset_.back()));
  std::vector<int> fill(offset_.begin(), offset_.end() - 1);
  for (VertexId v = 0; v < n; ++v)
    if (v != tree.root()) {
      neighbor_[fill[v]++] = parent[v];
      neighbor_[fill[parent[v]]++] = v;
    }
}

std::vector<int> TreeAdjacency::distances(VertexId source) const {
  std::vector<int> dist(static_cast<std::size_t>(vertex_count()), -1);
  std::vector<VertexId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (const VertexId w : neighbors(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

int TreeAdjacency::diameter() const {
  const auto first = distances(0);
  const auto far = static_cast<VertexId>(std::max_element(first.begin(), first.end()) - first.begin());
  const auto second = distances(far);
  return *std::max_element(second.begin(), second.end());
}

}  // namespace ustlocal
