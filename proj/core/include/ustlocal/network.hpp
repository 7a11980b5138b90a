#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ustlocal/random.hpp"

namespace ustlocal {

using VertexId = std::int32_t;

struct WeightedEdge {
  VertexId u = 0;
  VertexId v = 0;
  double conductance = 1.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Unordered vertex pair, stored with u <= v.
struct EdgeKey {
  VertexId u = 0;
  VertexId v = 0;

  EdgeKey() = default;
  EdgeKey(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// A finite connected network with positive symmetric conductances.
///
/// Parallel input edges are merged by adding conductances, so every unordered
/// pair appears at most once. A loop (u, u) is stored as a single adjacency
/// entry and contributes its conductance once to pi(u); a walk at u stays put
/// with probability c(u,u)/pi(u). Adjacency lists are sorted by neighbor id.
/// Instances are immutable after construction.
class Network {
 public:
  /// Validates and builds. Throws VertexOutOfRange, NonPositiveConductance,
  /// DisconnectedGraph (or InvalidParams for vertex_count < 1).
  static Network build(VertexId vertex_count, std::span<const WeightedEdge> edges);

  /// Unit-conductance convenience overload.
  static Network build(VertexId vertex_count,
                       std::span<const std::pair<VertexId, VertexId>> edges);

  VertexId vertex_count() const noexcept { return vertex_count_; }
  /// Number of distinct undirected edges, loops included.
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const VertexId> neighbors(VertexId v) const noexcept {
    return {neighbor_.data() + offset_[v], neighbor_.data() + offset_[v + 1]};
  }
  std::span<const double> conductances(VertexId v) const noexcept {
    return {conductance_.data() + offset_[v], conductance_.data() + offset_[v + 1]};
  }

  /// Number of adjacency entries at v (a loop counts once).
  int degree(VertexId v) const noexcept { return offset_[v + 1] - offset_[v]; }
  double pi(VertexId v) const noexcept { return pi_[v]; }
  double total_pi() const noexcept { return total_pi_; }
  double loop_conductance(VertexId v) const noexcept;

  /// c(u,v), or 0 when u and v are not adjacent.
  double conductance(VertexId u, VertexId v) const noexcept;
  bool adjacent(VertexId u, VertexId v) const noexcept { return conductance(u, v) > 0.0; }
  bool has_loops() const noexcept { return loop_count_ > 0; }

  /// No loops and every conductance exactly 1.
  bool is_simple_unit() const noexcept { return unit_ && loop_count_ == 0; }
  bool is_regular() const noexcept;

  /// Every edge once, as (u <= v), sorted.
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  /// Index of {u,v} in edges(), or -1.
  std::ptrdiff_t edge_index(VertexId u, VertexId v) const noexcept;

  /// One step of the network random walk: p(u,w) = c(u,w)/pi(u).
  VertexId step(VertexId from, Rng& rng) const noexcept;
  /// Vertex drawn with probability pi(v)/sum(pi).
  VertexId stationary_vertex(Rng& rng) const noexcept;

  bool valid_vertex(VertexId v) const noexcept { return v >= 0 && v < vertex_count_; }

 private:
  Network() = default;

  VertexId vertex_count_ = 0;
  std::vector<int> offset_;
  std::vector<VertexId> neighbor_;
  std::vector<double> conductance_;
  std::vector<double> cumulative_;  // per-vertex running sums of conductance_
  std::vector<double> pi_;
  std::vector<double> pi_cumulative_;
  std::vector<WeightedEdge> edges_;
  double total_pi_ = 0.0;
  std::size_t loop_count_ = 0;
  bool unit_ = true;
};

/// True when every vertex is reachable from vertex 0 using `edges`.
bool edges_connect(VertexId vertex_count, std::span<const WeightedEdge> edges);

}  // namespace ustlocal
