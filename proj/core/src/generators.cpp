#include "ustlocal/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ustlocal/error.hpp"

namespace ustlocal {

namespace {

using PairList = std::vector<std::pair<VertexId, VertexId>>;

Network from_pairs(VertexId n, const PairList& pairs) { return Network::build(n, pairs); }

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams(what);
}

void add_clique(PairList& out, VertexId first, VertexId size) {
  for (VertexId i = 0; i < size; ++i)
    for (VertexId j = i + 1; j < size; ++j) out.emplace_back(first + i, first + j);
}

std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// One uniform configuration-model pairing; empty result on a loop or repeat.
std::optional<PairList> try_uniform_pairing(VertexId n, int d, Rng& rng) {
  std::vector<VertexId> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  for (VertexId v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs.push_back(v);
  for (std::size_t i = stubs.size(); i > 1; --i)
    std::swap(stubs[i - 1], stubs[uniform_index(rng, i)]);
  PairList pairs;
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < stubs.size(); i += 2) {
    const VertexId a = stubs[i], b = stubs[i + 1];
    if (a == b || !seen.insert(pair_key(a, b)).second) return std::nullopt;
    pairs.emplace_back(a, b);
  }
  return pairs;
}

// Sequential pairing of random free stubs, skipping invalid pairs.
std::optional<PairList> try_sequential_pairing(VertexId n, int d, Rng& rng) {
  std::vector<VertexId> free_stubs;
  free_stubs.reserve(static_cast<std::size_t>(n) * d);
  for (VertexId v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) free_stubs.push_back(v);
  PairList pairs;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(free_stubs.size());
  while (!free_stubs.empty()) {
    const std::size_t m = free_stubs.size();
    bool placed = false;
    for (std::size_t attempt = 0; attempt < 64 * m && !placed; ++attempt) {
      const std::size_t i = uniform_index(rng, m);
      const std::size_t j = uniform_index(rng, m);
      if (i == j) continue;
      const VertexId a = free_stubs[i], b = free_stubs[j];
      if (a == b || seen.count(pair_key(a, b))) continue;
      seen.insert(pair_key(a, b));
      pairs.emplace_back(a, b);
      const std::size_t hi = std::max(i, j), lo = std::min(i, j);
      free_stubs[hi] = free_stubs.back();
      free_stubs.pop_back();
      free_stubs[lo] = free_stubs.back();
      free_stubs.pop_back();
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  return pairs;
}

bool pairs_connect(VertexId n, const PairList& pairs) {
  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back({a, b, 1.0});
  return edges_connect(n, edges);
}

}  // namespace

Family parse_family(const std::string& name) {
  static const std::map<std::string, Family> names = {
      {"complete", Family::complete},
      {"complete_bipartite", Family::complete_bipartite},
      {"random_regular", Family::random_regular},
      {"hypercube", Family::hypercube},
      {"torus", Family::torus},
      {"chained_cliques", Family::chained_cliques},
      {"star_of_cliques", Family::star_of_cliques},
      {"path", Family::path},
      {"cycle", Family::cycle},
      {"star", Family::star},
  };
  const auto it = names.find(name);
  if (it == names.end()) throw InvalidParams("unknown graph family '" + name + "'");
  return it->second;
}

std::string family_name(Family family) {
  switch (family) {
    case Family::complete: return "complete";
    case Family::complete_bipartite: return "complete_bipartite";
    case Family::random_regular: return "random_regular";
    case Family::hypercube: return "hypercube";
    case Family::torus: return "torus";
    case Family::chained_cliques: return "chained_cliques";
    case Family::star_of_cliques: return "star_of_cliques";
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::star: return "star";
  }
  return "unknown";
}

long GraphSpec::param(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end())
    throw InvalidParams(family_name(family) + " requires parameter '" + key + "'");
  return it->second;
}

std::string GraphSpec::describe() const {
  std::ostringstream out;
  out << family_name(family) << '(';
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out << ',';
    out << k << '=' << v;
    first = false;
  }
  out << ')';
  return out.str();
}

Network complete_graph(VertexId n) {
  require(n >= 1, "complete: n >= 1");
  PairList pairs;
  add_clique(pairs, 0, n);
  return from_pairs(n, pairs);
}

Network complete_bipartite_graph(VertexId a, VertexId b) {
  require(a >= 1 && b >= 1, "complete_bipartite: a, b >= 1");
  PairList pairs;
  for (VertexId i = 0; i < a; ++i)
    for (VertexId j = 0; j < b; ++j) pairs.emplace_back(i, a + j);
  return from_pairs(a + b, pairs);
}

Network hypercube_graph(int dimension) {
  require(dimension >= 0 && dimension <= 24, "hypercube: 0 <= dim <= 24");
  const VertexId n = VertexId{1} << dimension;
  PairList pairs;
  for (VertexId v = 0; v < n; ++v)
    for (int bit = 0; bit < dimension; ++bit) {
      const VertexId w = v ^ (VertexId{1} << bit);
      if (v < w) pairs.emplace_back(v, w);
    }
  return from_pairs(n, pairs);
}

Network torus_graph(int side, int dims) {
  require(side >= 3 && dims >= 1, "torus: side >= 3, dims >= 1");
  const double size = std::pow(static_cast<double>(side), dims);
  require(size <= 1e7, "torus: too many vertices");
  const auto n = static_cast<VertexId>(size);
  PairList pairs;
  for (VertexId v = 0; v < n; ++v) {
    VertexId stride = 1;
    for (int k = 0; k < dims; ++k) {
      const VertexId coord = (v / stride) % side;
      const VertexId w = v - coord * stride + ((coord + 1) % side) * stride;
      pairs.emplace_back(v, w);
      stride *= side;
    }
  }
  return from_pairs(n, pairs);
}

Network path_graph(VertexId n) {
  require(n >= 1, "path: n >= 1");
  PairList pairs;
  for (VertexId v = 0; v + 1 < n; ++v) pairs.emplace_back(v, v + 1);
  return from_pairs(n, pairs);
}

Network cycle_graph(VertexId n) {
  require(n >= 3, "cycle: n >= 3");
  PairList pairs;
  for (VertexId v = 0; v < n; ++v) pairs.emplace_back(v, (v + 1) % n);
  return from_pairs(n, pairs);
}

Network star_graph(VertexId leaves) {
  require(leaves >= 1, "star: leaves >= 1");
  PairList pairs;
  for (VertexId v = 1; v <= leaves; ++v) pairs.emplace_back(0, v);
  return from_pairs(leaves + 1, pairs);
}

Network chained_cliques_graph(int m, int d) {
  require(m >= 1 && d >= 2, "chained_cliques: m >= 1, d >= 2");
  const VertexId block = d + 1;
  PairList pairs;
  for (int i = 0; i < m; ++i) {
    const VertexId x = i * block, y = x + block - 1;
    for (VertexId a = 0; a < block; ++a)
      for (VertexId b = a + 1; b < block; ++b) {
        if (x + a == x && x + b == y) continue;
        pairs.emplace_back(x + a, x + b);
      }
    if (i + 1 < m) pairs.emplace_back(y, y + 1);
  }
  return from_pairs(m * block, pairs);
}

Network star_of_cliques_graph(int d) {
  require(d >= 4 && d % 2 == 0, "star_of_cliques: d even, d >= 4");
  PairList pairs;
  for (int c = 0; c < d / 2; ++c) {
    const VertexId first = 1 + c * d, last = first + d - 1;
    for (VertexId a = first; a <= last; ++a)
      for (VertexId b = a + 1; b <= last; ++b) {
        if (a == first && b == last) continue;
        pairs.emplace_back(a, b);
      }
    pairs.emplace_back(0, first);
    pairs.emplace_back(0, last);
  }
  return from_pairs(1 + (d / 2) * d, pairs);
}

Network random_regular_graph(VertexId n, int d, Rng& rng, RegularMethod method,
                             int max_restarts) {
  require(n >= 1 && d >= 1, "random_regular: n, d >= 1");
  require(d < n, "random_regular: d < n");
  require((static_cast<long>(n) * d) % 2 == 0, "random_regular: n*d even");
  if (method == RegularMethod::automatic) {
    // Expected restarts of exact rejection ~ exp((d^2-1)/4).
    const double expected = std::exp((static_cast<double>(d) * d - 1.0) / 4.0);
    method = expected * 20.0 <= max_restarts ? RegularMethod::exact_rejection
                                             : RegularMethod::sequential_pairing;
  }
  for (int attempt = 0; attempt <= max_restarts; ++attempt) {
    auto pairs = method == RegularMethod::exact_rejection ? try_uniform_pairing(n, d, rng)
                                                          : try_sequential_pairing(n, d, rng);
    if (!pairs || !pairs_connect(n, *pairs)) continue;
    return from_pairs(n, *pairs);
  }
  throw GenerationTimeout("random_regular(n=" + std::to_string(n) + ",d=" + std::to_string(d) +
                          ") exceeded " + std::to_string(max_restarts) + " restarts");
}

Network generate(const GraphSpec& spec, std::uint64_t seed) {
  const auto p = [&](const char* key) { return static_cast<int>(spec.param(key)); };
  switch (spec.family) {
    case Family::complete: return complete_graph(p("n"));
    case Family::complete_bipartite: return complete_bipartite_graph(p("a"), p("b"));
    case Family::random_regular: {
      Rng rng = derive_rng(seed, 0);
      return random_regular_graph(p("n"), p("d"), rng);
    }
    case Family::hypercube: return hypercube_graph(p("dim"));
    case Family::torus: return torus_graph(p("side"), p("dims"));
    case Family::chained_cliques: return chained_cliques_graph(p("m"), p("d"));
    case Family::star_of_cliques: return star_of_cliques_graph(p("d"));
    case Family::path: return path_graph(p("n"));
    case Family::cycle: return cycle_graph(p("n"));
    case Family::star: return star_graph(p("leaves"));
  }
  throw InvalidParams("unhandled family");
}

GraphSpec parse_short_graph_name(const std::string& name) {
  std::smatch m;
  static const std::regex bipartite(R"(k(\d+),(\d+))");
  static const std::regex single(R"(([kcpsq])(\d+))");
  if (std::regex_match(name, m, bipartite)) {
    return {Family::complete_bipartite, {{"a", std::stol(m[1])}, {"b", std::stol(m[2])}}};
  }
  if (std::regex_match(name, m, single)) {
    const long value = std::stol(m[2]);
    switch (m[1].str()[0]) {
      case 'k': return {Family::complete, {{"n", value}}};
      case 'c': return {Family::cycle, {{"n", value}}};
      case 'p': return {Family::path, {{"n", value}}};
      case 's': return {Family::star, {{"leaves", value}}};
      case 'q': return {Family::hypercube, {{"dim", value}}};
    }
  }
  throw InvalidParams("unrecognized graph name '" + name + "'");
}

}  // namespace ustlocal
