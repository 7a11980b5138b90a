#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ustlocal/laplacian.hpp"
#include "ustlocal/network.hpp"
#include "ustlocal/walk.hpp"

namespace ustlocal {

enum class ResistanceMethod { solve, reduced, monte_carlo };
const char* method_name(ResistanceMethod method);

struct ResistanceValue {
  double value = 0.0;
  ResistanceMethod method = ResistanceMethod::solve;
};

// Global tolerances shared by the identity checks.
inline constexpr double kIdentityTolerance = 1e-9;
inline constexpr double kCrossMethodTolerance = 1e-8;
inline constexpr double kDefaultSigmaGate = 4.0;

/// Grounded Laplacian solve. Throws VertexOutOfRange, SingularSystem.
ResistanceValue resistance_pair(const Network& net, VertexId u, VertexId v);

/// Contracts S into one terminal, then resistance_pair.
ResistanceValue resistance_to_set(const Network& net, VertexId v, std::span<const VertexId> set);

enum class GreenMethod { matrix_inverse, closed_form };

/// g_a(i,j): voltage at i when unit current enters at j and exits at a.
/// matrix_inverse reads Delta[a]^{-1}; closed_form uses
/// (R(a,j) + R(a,i) - R(i,j)) / 2. Throws InvalidParams if i or j equals a.
double green_function(const Network& net, VertexId a, VertexId i, VertexId j,
                      GreenMethod method = GreenMethod::matrix_inverse);

/// Schur complement of the Laplacian onto `terminals`, returned as a network
/// whose vertex k is terminals[k]. Loops never arise (zero row sums).
Network reduced_network(const Network& net, std::span<const VertexId> terminals);

/// Sum over edges of c(e) * R(e). For a connected network this is |V| - 1.
double foster_sum(const Network& net);
double foster_sum(const Network& net, const LaplacianSystem& system);

/// Cutset lower bound for R(u,v): with s = c(u,v) (0 if not adjacent),
/// 1/(pi(u)+s) + 1/(pi(v)+s). Reduces to the 1/(deg+1) form for adjacent
/// unit-conductance pairs and to 1/deg otherwise.
double nash_williams_bound(const Network& net, VertexId u, VertexId v);

/// Degree form of the same bound for simple unit graphs.
double degree_lower_bound(int deg_u, int deg_v, bool adjacent = true);

/// Edges whose endpoint resistance is at least eps.
std::vector<WeightedEdge> high_resistance_edges(const Network& net, double eps);
std::vector<WeightedEdge> high_resistance_edges(const Network& net, const LaplacianSystem& system,
                                                double eps);

/// Upper bound |V| / (eps*d - 2) on the number of such edges in a simple
/// d-regular graph; requires eps > 2/d.
double high_resistance_cap(VertexId vertex_count, int d, double eps);

/// Vertices touching no edge with endpoint resistance >= threshold.
std::vector<VertexId> good_vertices(const Network& net, double threshold);
std::vector<VertexId> good_vertices(const Network& net, const LaplacianSystem& system,
                                    double threshold);

/// Observed-vs-predicted record for Monte Carlo identity checks.
struct MonteCarloComparison {
  double observed = 0.0;
  double predicted = 0.0;
  double sigma = 0.0;  // standard error of `observed`
  double z = 0.0;      // (observed - predicted) / sigma, 0 when sigma == 0
  std::size_t samples = 0;

  bool within(double sigmas = kDefaultSigmaGate) const;
};

/// Mean of E_u tau_v + E_v tau_u over `samples` independent round trips
/// against (sum of pi) * R(u,v), which is 2|E| R on unit graphs.
MonteCarloComparison commute_time_check(const Network& net, VertexId u, VertexId v,
                                        std::size_t samples, Rng& rng);

/// Estimates P_u(tau_v < tau_u^+). `observed` is 1/(pi(u) * estimate),
/// `predicted` the solver resistance; `z` is computed on the probability
/// scale against the binomial standard error at 1/(pi(u) R).
struct EscapeComparison {
  MonteCarloComparison resistance;
  double escape_probability = 0.0;
  double predicted_probability = 0.0;
};
EscapeComparison escape_probability_check(const Network& net, VertexId u, VertexId v,
                                          std::size_t samples, Rng& rng);

/// Concentration band for R(X_k <-> {X_1..X_{k-1}}) on T-compatible tuples:
/// center k / ((k-1) d), half-width constant * k * log^k d / d^2.
struct TupleBand {
  double center = 0.0;
  double half_width = 0.0;
  double min_fraction = 0.0;  // 1 - 2k^3 / log^k d
};
inline constexpr double kTupleBandConstant = 72.0;
TupleBand tuple_band(std::size_t k, int d, double constant = kTupleBandConstant);

struct TupleRecord {
  std::vector<VertexId> vertices;
  bool compatible = false;
  double resistance = 0.0;  // R(last <-> rest); meaningful only if compatible
  bool inside_band = false;
};

struct TupleExperimentOptions {
  int d = 0;  // nominal degree
  double band_constant = kTupleBandConstant;
  TupleStart start = TupleStart::uniform;
};

std::vector<TupleRecord> tuple_resistance_experiment(const Network& net,
                                                     const LaplacianSystem& system,
                                                     const TreePattern& pattern,
                                                     std::size_t tuples, Rng& rng,
                                                     const TupleExperimentOptions& options);

/// Fraction of records that are compatible and inside the band.
double fraction_inside_band(std::span<const TupleRecord> records);

/// Prod_{i>=1} R(v_i <-> {v_0..v_{i-1}}) for a compatible tuple: the
/// probability that the UST contains all pattern edges.
double resistance_product(const LaplacianSystem& system, std::span<const VertexId> tuple);

/// (1/n) Sum over good T-compatible tuples of resistance_product, where a
/// tuple is good when its first `interior` vertices are good vertices.
/// Exhaustive; intended for small graphs.
double good_tuple_resistance_sum(const Network& net, const LaplacianSystem& system,
                                 const TreePattern& pattern, std::size_t interior,
                                 double good_threshold);

}  // namespace ustlocal
