#include "ustlocal/electric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ustlocal/contraction.hpp"
#include "ustlocal/error.hpp"

namespace ustlocal {

const char* method_name(ResistanceMethod method) {
  switch (method) {
    case ResistanceMethod::solve: return "solve";
    case ResistanceMethod::reduced: return "reduced";
    case ResistanceMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

ResistanceValue resistance_pair(const Network& net, VertexId u, VertexId v) {
  if (!net.valid_vertex(u) || !net.valid_vertex(v))
    throw VertexOutOfRange("resistance_pair(" + std::to_string(u) + "," + std::to_string(v) + ")");
  if (u == v) return {0.0, ResistanceMethod::solve};
  const LaplacianSystem system(net);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(net.vertex_count());
  rhs(u) = 1.0;
  rhs(v) = -1.0;
  const Eigen::VectorXd x = system.solve(rhs);
  if (system.relative_residual(rhs, x) > 1e-10)
    throw SingularSystem("solver residual above 1e-10");
  return {std::max(0.0, x(u) - x(v)), ResistanceMethod::solve};
}

ResistanceValue resistance_to_set(const Network& net, VertexId v, std::span<const VertexId> set) {
  if (set.empty()) throw InvalidParams("resistance_to_set: S must be nonempty");
  if (!net.valid_vertex(v)) throw VertexOutOfRange(std::to_string(v));
  if (std::find(set.begin(), set.end(), v) != set.end())
    throw InvalidParams("resistance_to_set: v must not belong to S");
  const Contraction merged = merge_vertices(net, set);
  auto value = resistance_pair(merged.network, merged.merge_map[v], merged.merge_map[set.front()]);
  value.method = ResistanceMethod::reduced;
  return value;
}

double green_function(const Network& net, VertexId a, VertexId i, VertexId j, GreenMethod method) {
  if (i == a || j == a) throw InvalidParams("green_function: i, j must differ from a");
  if (!net.valid_vertex(a) || !net.valid_vertex(i) || !net.valid_vertex(j))
    throw VertexOutOfRange("green_function");
  if (method == GreenMethod::matrix_inverse) {
    const LaplacianSystem system(net, SolverKind::automatic, a);
    return system.green(i, j);
  }
  const LaplacianSystem system(net);
  return 0.5 * (system.resistance(a, j) + system.resistance(a, i) - system.resistance(i, j));
}

Network reduced_network(const Network& net, std::span<const VertexId> terminals) {
  const VertexId n = net.vertex_count();
  if (terminals.size() < 2) throw InvalidParams("reduced_network needs at least 2 terminals");
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < terminals.size(); ++k) {
    if (!net.valid_vertex(terminals[k])) throw VertexOutOfRange(std::to_string(terminals[k]));
    if (position[terminals[k]] >= 0) throw InvalidParams("duplicate terminal");
    position[terminals[k]] = static_cast<int>(k);
  }
  std::vector<VertexId> interior;
  for (VertexId v = 0; v < n; ++v)
    if (position[v] < 0) interior.push_back(v);

  const auto kk = static_cast<Eigen::Index>(terminals.size());
  const auto uu = static_cast<Eigen::Index>(interior.size());
  Eigen::MatrixXd lkk = Eigen::MatrixXd::Zero(kk, kk), lku = Eigen::MatrixXd::Zero(kk, uu),
                  luu = Eigen::MatrixXd::Zero(uu, uu);
  std::vector<int> interior_pos(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < interior.size(); ++k) interior_pos[interior[k]] = static_cast<int>(k);

  const auto add = [&](VertexId a, VertexId b, double value) {
    if (position[a] >= 0 && position[b] >= 0) lkk(position[a], position[b]) += value;
    else if (position[a] >= 0) lku(position[a], interior_pos[b]) += value;
    else if (position[b] < 0) luu(interior_pos[a], interior_pos[b]) += value;
  };
  for (const auto& e : net.edges()) {
    if (e.u == e.v) continue;
    add(e.u, e.u, e.conductance);
    add(e.v, e.v, e.conductance);
    add(e.u, e.v, -e.conductance);
    add(e.v, e.u, -e.conductance);
  }

  Eigen::MatrixXd schur = lkk;
  if (uu > 0) {
    const Eigen::LLT<Eigen::MatrixXd> factor(luu);
    if (factor.info() != Eigen::Success) throw SingularSystem("interior block not positive definite");
    schur -= lku * factor.solve(lku.transpose());
  }

  const double scale = schur.diagonal().cwiseAbs().maxCoeff();
  std::vector<WeightedEdge> edges;
  for (Eigen::Index a = 0; a < kk; ++a)
    for (Eigen::Index b = a + 1; b < kk; ++b) {
      const double c = -0.5 * (schur(a, b) + schur(b, a));
      if (c > 1e-13 * scale)
        edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(b), c});
    }
  return Network::build(static_cast<VertexId>(kk), edges);
}

double foster_sum(const Network& net, const LaplacianSystem& system) {
  double total = 0.0;
  for (const auto& e : net.edges())
    if (e.u != e.v) total += e.conductance * system.resistance(e.u, e.v);
  return total;
}

double foster_sum(const Network& net) { return foster_sum(net, LaplacianSystem(net)); }

double nash_williams_bound(const Network& net, VertexId u, VertexId v) {
  if (u == v) throw InvalidParams("nash_williams_bound requires u != v");
  // Loops never separate anything; leave them out of the cut sizes.
  const double shared = net.conductance(u, v);
  const double cut_u = net.pi(u) - net.loop_conductance(u);
  const double cut_v = net.pi(v) - net.loop_conductance(v);
  return 1.0 / (cut_u + shared) + 1.0 / (cut_v + shared);
}

double degree_lower_bound(int deg_u, int deg_v, bool adjacent) {
  const double bump = adjacent ? 1.0 : 0.0;
  return 1.0 / (deg_u + bump) + 1.0 / (deg_v + bump);
}

std::vector<WeightedEdge> high_resistance_edges(const Network& net, const LaplacianSystem& system,
                                                double eps) {
  if (!(eps > 0.0)) throw InvalidParams("eps must be positive");
  std::vector<WeightedEdge> out;
  for (const auto& e : net.edges())
    if (e.u != e.v && system.resistance(e.u, e.v) >= eps) out.push_back(e);
  return out;
}

std::vector<WeightedEdge> high_resistance_edges(const Network& net, double eps) {
  return high_resistance_edges(net, LaplacianSystem(net), eps);
}

double high_resistance_cap(VertexId vertex_count, int d, double eps) {
  if (!(eps * d > 2.0)) throw InvalidParams("high_resistance_cap requires eps > 2/d");
  return vertex_count / (eps * d - 2.0);
}

std::vector<VertexId> good_vertices(const Network& net, const LaplacianSystem& system,
                                    double threshold) {
  std::vector<char> bad(static_cast<std::size_t>(net.vertex_count()), 0);
  for (const auto& e : high_resistance_edges(net, system, threshold)) bad[e.u] = bad[e.v] = 1;
  std::vector<VertexId> out;
  for (VertexId v = 0; v < net.vertex_count(); ++v)
    if (!bad[v]) out.push_back(v);
  return out;
}

std::vector<VertexId> good_vertices(const Network& net, double threshold) {
  return good_vertices(net, LaplacianSystem(net), threshold);
}

bool MonteCarloComparison::within(double sigmas) const {
  if (sigma == 0.0) return std::abs(observed - predicted) <= 1e-12 * std::max(1.0, std::abs(predicted));
  return std::abs(z) <= sigmas;
}

namespace {

std::size_t hitting_steps(const Network& net, VertexId from, VertexId target, Rng& rng) {
  std::size_t steps = 0;
  while (from != target) {
    from = net.step(from, rng);
    ++steps;
  }
  return steps;
}

}  // namespace

MonteCarloComparison commute_time_check(const Network& net, VertexId u, VertexId v,
                                        std::size_t samples, Rng& rng) {
  if (samples == 0) throw InvalidParams("samples must be positive");
  if (u == v) throw InvalidParams("commute time needs distinct vertices");
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = static_cast<double>(hitting_steps(net, u, v, rng) + hitting_steps(net, v, u, rng));
    sum += t;
    sum_sq += t * t;
  }
  MonteCarloComparison out;
  out.samples = samples;
  out.observed = sum / samples;
  out.predicted = net.total_pi() * resistance_pair(net, u, v).value;
  const double var = samples > 1 ? (sum_sq - samples * out.observed * out.observed) / (samples - 1) : 0.0;
  out.sigma = std::sqrt(std::max(0.0, var) / samples);
  out.z = out.sigma > 0.0 ? (out.observed - out.predicted) / out.sigma : 0.0;
  return out;
}

EscapeComparison escape_probability_check(const Network& net, VertexId u, VertexId v,
                                          std::size_t samples, Rng& rng) {
  if (samples == 0) throw InvalidParams("samples must be positive");
  if (u == v) throw InvalidParams("escape probability needs distinct vertices");
  std::size_t escapes = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    VertexId at = net.step(u, rng);
    while (at != u && at != v) at = net.step(at, rng);
    if (at == v) ++escapes;
  }
  EscapeComparison out;
  const double resistance = resistance_pair(net, u, v).value;
  out.escape_probability = static_cast<double>(escapes) / samples;
  out.predicted_probability = 1.0 / (net.pi(u) * resistance);
  const double p = out.predicted_probability;
  const double sigma_p = std::sqrt(std::max(0.0, p * (1.0 - p)) / samples);

  auto& r = out.resistance;
  r.samples = samples;
  r.predicted = resistance;
  r.observed = escapes == 0 ? std::numeric_limits<double>::infinity()
                            : 1.0 / (net.pi(u) * out.escape_probability);
  r.sigma = sigma_p / (net.pi(u) * p * p);  // delta method
  r.z = sigma_p > 0.0 ? (out.escape_probability - p) / sigma_p : 0.0;
  if (sigma_p == 0.0 && escapes != samples) r.z = std::numeric_limits<double>::infinity();
  return out;
}

TupleBand tuple_band(std::size_t k, int d, double constant) {
  if (k < 2 || d < 2) throw InvalidParams("tuple_band needs k >= 2 and d >= 2");
  const double kd = static_cast<double>(k);
  const double logk = std::pow(std::log(static_cast<double>(d)), kd);
  TupleBand band;
  band.center = kd / ((kd - 1.0) * d);
  band.half_width = constant * kd * logk / (static_cast<double>(d) * d);
  band.min_fraction = 1.0 - 2.0 * kd * kd * kd / logk;
  return band;
}

std::vector<TupleRecord> tuple_resistance_experiment(const Network& net,
                                                     const LaplacianSystem& system,
                                                     const TreePattern& pattern,
                                                     std::size_t tuples, Rng& rng,
                                                     const TupleExperimentOptions& options) {
  if (pattern.size() < 3) throw InvalidParams("tuple experiment needs a pattern with k >= 3");
  const TupleBand band = tuple_band(pattern.size(), options.d, options.band_constant);
  std::vector<TupleRecord> records;
  records.reserve(tuples);
  for (std::size_t t = 0; t < tuples; ++t) {
    TupleSample sample = t_compatible_sample(net, pattern, rng, options.start);
    TupleRecord record;
    record.compatible = sample.compatible;
    if (record.compatible) {
      const std::span<const VertexId> all(sample.vertices);
      record.resistance = system.resistance_to_set(all.back(), all.first(all.size() - 1));
      record.inside_band = std::abs(record.resistance - band.center) <= band.half_width;
    }
    record.vertices = std::move(sample.vertices);
    records.push_back(std::move(record));
  }
  return records;
}

double fraction_inside_band(std::span<const TupleRecord> records) {
  if (records.empty()) return 0.0;
  const auto inside = std::count_if(records.begin(), records.end(),
                                    [](const TupleRecord& r) { return r.compatible && r.inside_band; });
  return static_cast<double>(inside) / records.size();
}

double resistance_product(const LaplacianSystem& system, std::span<const VertexId> tuple) {
  double product = 1.0;
  for (std::size_t i = 1; i < tuple.size(); ++i)
    product *= system.resistance_to_set(tuple[i], tuple.first(i));
  return product;
}

double good_tuple_resistance_sum(const Network& net, const LaplacianSystem& system,
                                 const TreePattern& pattern, std::size_t interior,
                                 double good_threshold) {
  if (!pattern.valid()) throw InvalidParams("malformed tree pattern");
  std::vector<char> good(static_cast<std::size_t>(net.vertex_count()), 0);
  for (const VertexId v : good_vertices(net, system, good_threshold)) good[v] = 1;

  const std::size_t k = pattern.size();
  std::vector<VertexId> tuple(k);
  double total = 0.0;
  // Depth-first over T-compatible tuples in pattern order.
  const auto extend = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      double weight = 1.0;
      for (std::size_t j = 1; j < k; ++j) weight *= net.conductance(tuple[j], tuple[pattern.parent[j]]);
      total += weight * resistance_product(system, tuple);
      return;
    }
    const auto candidates = net.neighbors(tuple[pattern.parent[i]]);
    for (const VertexId w : candidates) {
      if (std::find(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(i), w) !=
          tuple.begin() + static_cast<std::ptrdiff_t>(i))
        continue;
      if (i < interior && !good[w]) continue;
      tuple[i] = w;
      self(self, i + 1);
    }
  };
  for (VertexId v = 0; v < net.vertex_count(); ++v) {
    if (interior > 0 && !good[v]) continue;
    tuple[0] = v;
    if (k == 1) {
      total += 1.0;
      continue;
    }
    extend(extend, 1);
  }
  return total / net.vertex_count();
}

}  // namespace ustlocal
