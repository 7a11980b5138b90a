#include "ustlocal/census.hpp"

#include <cmath>

#include "ustlocal/error.hpp"

namespace ustlocal {

std::uint64_t BallCensus::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& [code, count] : counts) sum += count;
  return sum;
}

double BallCensus::frequency(const CanonicalCode& code) const {
  const auto it = counts.find(code);
  const auto n = total();
  return it == counts.end() || n == 0 ? 0.0 : static_cast<double>(it->second) / n;
}

double BallCensus::short_fraction() const {
  std::uint64_t short_count = 0;
  for (const auto& [code, count] : counts)
    if (code_height(code) < radius) short_count += count;
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(short_count) / n;
}

void BallCensus::merge(const BallCensus& other) {
  if (other.radius != radius) throw InvalidParams("cannot merge censuses of different radius");
  samples += other.samples;
  for (const auto& [code, count] : other.counts) counts[code] += count;
}

void add_tree(BallCensus& census, const SpanningTree& tree, VertexSelection selection, Rng& rng) {
  const TreeAdjacency adj(tree);
  const VertexId n = tree.vertex_count();
  if (selection == VertexSelection::all) {
    for (VertexId v = 0; v < n; ++v) ++census.counts[ball_code(adj, v, census.radius)];
    census.vertices_per_sample = static_cast<std::uint64_t>(n);
  } else {
    const auto v = static_cast<VertexId>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    ++census.counts[ball_code(adj, v, census.radius)];
    census.vertices_per_sample = 1;
  }
  ++census.samples;
}

void add_shape(BallCensus& census, const RootedShape& shape) {
  ++census.counts[shape.code()];
  ++census.samples;
  census.vertices_per_sample = 1;
}

std::map<CanonicalCode, std::uint64_t> quenched_counts(const SpanningTree& tree, int r) {
  const TreeAdjacency adj(tree);
  std::map<CanonicalCode, std::uint64_t> out;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) ++out[ball_code(adj, v, r)];
  return out;
}

double tv_distance(const BallCensus& census, const LimitLaw& law, double cutoff) {
  const auto n = census.total();
  if (n == 0) throw InvalidParams("empty census");
  double tv = 0.0, law_residual = 1.0, observed_in_buckets = 0.0;
  for (const auto& [code, p] : law.probability) {
    if (p < cutoff) continue;
    const double f = census.frequency(code);
    tv += std::abs(f - p);
    law_residual -= p;
    observed_in_buckets += f;
  }
  const double census_residual = 1.0 - observed_in_buckets;
  tv += std::abs(std::max(0.0, census_residual) - std::max(0.0, law_residual));
  return 0.5 * tv;
}

double tv_distance(const std::map<CanonicalCode, double>& p,
                   const std::map<CanonicalCode, double>& q) {
  double tv = 0.0;
  for (const auto& [code, x] : p) {
    const auto it = q.find(code);
    tv += std::abs(x - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [code, y] : q)
    if (!p.count(code)) tv += std::abs(y);
  return 0.5 * tv;
}

std::map<CanonicalCode, double> empirical_law(const BallCensus& census) {
  std::map<CanonicalCode, double> out;
  const auto n = static_cast<double>(census.total());
  for (const auto& [code, count] : census.counts) out.emplace(code, count / n);
  return out;
}

}  // namespace ustlocal
