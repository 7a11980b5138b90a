#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ustlocal/network.hpp"

namespace ustlocal {

struct WalkPath {
  std::vector<VertexId> vertices;  // steps + 1 entries

  std::size_t steps() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
};

/// `steps` transitions of the network walk from `start`. Throws VertexOutOfRange.
WalkPath random_walk(const Network& net, VertexId start, std::size_t steps, Rng& rng);

/// pi-weighted vertex (uniform on regular unit networks).
VertexId stationary_vertex(const Network& net, Rng& rng);

/// Shape of a rooted tree on k vertices labeled 0..k-1 so that vertex 0 is the
/// root and parent[i] < i for i >= 1 (every prefix spans a subtree; BFS order
/// satisfies this). parent[0] is -1.
struct TreePattern {
  std::vector<int> parent;

  std::size_t size() const noexcept { return parent.size(); }
  bool valid() const noexcept;
};

struct TupleSample {
  std::vector<VertexId> vertices;
  bool compatible = false;  // distinct vertices realizing every pattern edge
};

enum class TupleStart { uniform, stationary };

/// X_0 uniform (or stationary); each later X_i is a walk step from the image
/// of its pattern parent. Throws InvalidParams for a malformed pattern.
TupleSample t_compatible_sample(const Network& net, const TreePattern& pattern, Rng& rng,
                                TupleStart start = TupleStart::uniform);

/// Distinctness plus edge existence for every pattern edge.
bool is_t_compatible(const Network& net, const TreePattern& pattern,
                     std::span<const VertexId> tuple);

}  // namespace ustlocal
