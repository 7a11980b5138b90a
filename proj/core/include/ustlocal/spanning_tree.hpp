#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ustlocal/network.hpp"

namespace ustlocal {

/// Spanning tree stored as a parent array; parent[root] == -1.
class SpanningTree {
 public:
  SpanningTree() = default;
  SpanningTree(VertexId root, std::vector<VertexId> parent);

  /// Re-roots an unordered edge set at `root`. Throws InvalidParams unless the
  /// edges form a spanning tree on vertex_count vertices.
  static SpanningTree from_edges(VertexId vertex_count, std::span<const EdgeKey> edges,
                                 VertexId root = 0);

  VertexId root() const noexcept { return root_; }
  VertexId vertex_count() const noexcept { return static_cast<VertexId>(parent_.size()); }
  const std::vector<VertexId>& parent() const noexcept { return parent_; }

  /// The n-1 edges, each as (min, max), sorted.
  std::vector<EdgeKey> edges() const;
  bool contains(VertexId u, VertexId v) const noexcept {
    return (u != root_ && parent_[u] == v) || (v != root_ && parent_[v] == u);
  }

  /// Spanning, acyclic, n-1 edges, all present in `net`.
  bool is_valid(const Network& net) const;
  /// Throws InvalidParams describing the first violated invariant.
  void validate(const Network& net) const;

  /// Edge indices into net.edges() as a bitmask; requires edge_count <= 64.
  std::uint64_t edge_mask(const Network& net) const;

  friend bool operator==(const SpanningTree&, const SpanningTree&) = default;

 private:
  VertexId root_ = 0;
  std::vector<VertexId> parent_;
};

/// Undirected CSR adjacency of a tree, for ball extraction and distances.
class TreeAdjacency {
 public:
  explicit TreeAdjacency(const SpanningTree& tree);

  VertexId vertex_count() const noexcept { return static_cast<VertexId>(offset_.size()) - 1; }
  std::span<const VertexId> neighbors(VertexId v) const noexcept {
    return {neighbor_.data() + offset_[v], neighbor_.data() + offset_[v + 1]};
  }
  int degree(VertexId v) const noexcept { return offset_[v + 1] - offset_[v]; }

  /// BFS distances from `source`.
  std::vector<int> distances(VertexId source) const;
  /// Longest path length (edges), by double BFS.
  int diameter() const;

 private:
  std::vector<int> offset_;
  std::vector<VertexId> neighbor_;
};

}  // namespace ustlocal
