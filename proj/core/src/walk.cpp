#include "ustlocal/walk.hpp"

#include <algorithm>
#include <string>

#include "ustlocal/error.hpp"

namespace ustlocal {

WalkPath random_walk(const Network& net, VertexId start, std::size_t steps, Rng& rng) {
  if (!net.valid_vertex(start)) throw VertexOutOfRange("walk start " + std::to_string(start));
  WalkPath path;
  path.vertices.reserve(steps + 1);
  path.vertices.push_back(start);
  VertexId at = start;
  for (std::size_t i = 0; i < steps; ++i) {
    at = net.step(at, rng);
    path.vertices.push_back(at);
  }
  return path;
}

VertexId stationary_vertex(const Network& net, Rng& rng) { return net.stationary_vertex(rng); }

bool TreePattern::valid() const noexcept {
  if (parent.empty() || parent[0] != -1) return false;
  for (std::size_t i = 1; i < parent.size(); ++i)
    if (parent[i] < 0 || static_cast<std::size_t>(parent[i]) >= i) return false;
  return true;
}

TupleSample t_compatible_sample(const Network& net, const TreePattern& pattern, Rng& rng,
                                TupleStart start) {
  if (!pattern.valid()) throw InvalidParams("tree pattern must have parent[i] < i");
  TupleSample out;
  out.vertices.resize(pattern.size());
  out.vertices[0] = start == TupleStart::uniform
                        ? static_cast<VertexId>(uniform_index(rng, static_cast<std::uint64_t>(net.vertex_count())))
                        : net.stationary_vertex(rng);
  for (std::size_t i = 1; i < pattern.size(); ++i)
    out.vertices[i] = net.step(out.vertices[pattern.parent[i]], rng);
  out.compatible = is_t_compatible(net, pattern, out.vertices);
  return out;
}

bool is_t_compatible(const Network& net, const TreePattern& pattern,
                     std::span<const VertexId> tuple) {
  if (tuple.size() != pattern.size()) return false;
  std::vector<VertexId> sorted(tuple.begin(), tuple.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 1; i < pattern.size(); ++i)
    if (!net.adjacent(tuple[i], tuple[pattern.parent[i]])) return false;
  return true;
}

}  // namespace ustlocal
