#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ustlocal/network.hpp"

namespace ustlocal {

enum class Family {
  complete,
  complete_bipartite,
  random_regular,
  hypercube,
  torus,
  chained_cliques,
  star_of_cliques,
  path,
  cycle,
  star,
};

Family parse_family(const std::string& name);  // throws InvalidParams
std::string family_name(Family family);

/// A named family plus its integer parameters, e.g. {random_regular, {n, d}}.
struct GraphSpec {
  Family family = Family::complete;
  std::map<std::string, long> params;

  long param(const std::string& key) const;  // throws InvalidParams if absent
  std::string describe() const;              // "random_regular(n=100,d=10)"
};

Network complete_graph(VertexId n);
/// Sides {0..a-1} and {a..a+b-1}.
Network complete_bipartite_graph(VertexId a, VertexId b);
Network hypercube_graph(int dimension);
/// side^dims vertices on the discrete torus, side >= 3.
Network torus_graph(int side, int dims);
Network path_graph(VertexId n);
Network cycle_graph(VertexId n);
/// Center 0, leaves 1..leaves.
Network star_graph(VertexId leaves);

/// m copies of K_{d+1}; in copy i the edge (x_i, y_i) between its first and
/// last vertex is removed and (y_i, x_{i+1}) is added.
Network chained_cliques_graph(int m, int d);

/// Hub vertex 0 plus d/2 copies of K_d, each missing one edge whose two
/// endpoints are joined to the hub.
Network star_of_cliques_graph(int d);

enum class RegularMethod {
  automatic,  // exact rejection when feasible, sequential pairing otherwise
  exact_rejection,
  sequential_pairing,
};

/// Simple connected d-regular graph on n vertices.
///
/// exact_rejection draws uniform configuration-model pairings and restarts on
/// any loop or repeated pair, so the output is uniform over simple graphs.
/// Its acceptance rate is about exp(-(d^2-1)/4), hopeless past d ~ 6.
/// sequential_pairing pairs random free stubs one at a time, skipping pairs
/// that would create a loop or repeat, restarting on a dead end; this is only
/// asymptotically uniform. Disconnected outcomes are restarted too.
/// Throws GenerationTimeout after `max_restarts` restarts.
Network random_regular_graph(VertexId n, int d, Rng& rng,
                             RegularMethod method = RegularMethod::automatic,
                             int max_restarts = 10000);

/// Dispatches on spec.family; `seed` only matters for random_regular.
Network generate(const GraphSpec& spec, std::uint64_t seed);

/// Accepts short names used on the command line: "k4" (complete), "c5"
/// (cycle), "p3" (path), "s4" (star with 4 leaves), "k3,3" (bipartite),
/// "q3" (hypercube). Throws InvalidParams for anything else.
GraphSpec parse_short_graph_name(const std::string& name);

}  // namespace ustlocal
