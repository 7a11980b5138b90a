#pragma once

#include <map>
#include <span>
#include <vector>

#include "ustlocal/network.hpp"

namespace ustlocal {

/// Result of contracting an edge set A and deleting an edge set B.
struct Contraction {
  Network network;
  /// Original vertex -> contracted vertex. Classes are numbered in order of
  /// their smallest original vertex.
  std::vector<VertexId> merge_map;
  /// Contracted edge -> the original edges merged into it (conductances sum).
  std::map<EdgeKey, std::vector<WeightedEdge>> provenance;
};

/// G/A - B: contract A, erase B, drop loops, merge parallel edges by adding
/// conductances. Both operations preserve the weighted UST law and every
/// effective resistance between surviving classes.
/// Throws NotAnEdge, InvalidParams (A and B overlap), CycleInA, DisconnectsGraph.
Contraction contract_delete(const Network& net, std::span<const EdgeKey> contract,
                            std::span<const EdgeKey> remove);

/// Identifies every vertex of `group` into one vertex (loops dropped). This
/// is contraction without requiring the group to be joined by edges.
Contraction merge_vertices(const Network& net, std::span<const VertexId> group);

}  // namespace ustlocal
