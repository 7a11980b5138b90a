#pragma once

#include "ustlocal/network.hpp"

namespace ustlocal {

/// How far a simple graph is from d-regular, in the sense of the "high degree
/// almost regular" conditions at a single tolerance delta:
///   (1) at least (1-delta)|V| vertices have |deg - d| <= delta*d;
///   (2) |sum deg - d|V|| <= delta*d*|V|.
struct AlmostRegularReport {
  int d = 0;
  double delta = 0.0;            // smallest delta satisfying (1) and (2) jointly
  double concentrated_fraction = 0.0;  // fraction with |deg-d| <= delta*d at delta
  double degree_sum_deviation = 0.0;   // |sum deg - d n| / (d n)
};

inline constexpr double kAlmostRegularResolution = 1e-6;

/// Bisection to kAlmostRegularResolution; delta is exactly 0 iff the graph is
/// d-regular. Degrees count distinct neighbors.
AlmostRegularReport check_almost_regular(const Network& net, int d);

/// Both conditions evaluated at one tolerance.
bool almost_regular_at(const Network& net, int d, double delta);

}  // namespace ustlocal
