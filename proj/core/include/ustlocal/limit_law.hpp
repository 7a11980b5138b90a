#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ustlocal/rooted_shape.hpp"

namespace ustlocal {

/// Radius-r ball law of the Poisson(1) Galton-Watson tree conditioned to
/// survive: |T_r| e^{-|V|+|T_r|} / |Stab_T| when height == r, else 0.
/// Throws InvalidParams for r < 1.
double limit_prob_conditioned(const RootedShape& shape, int r);
inline double limit_prob_conditioned(const RootedShape& shape) {
  return limit_prob_conditioned(shape, shape.height());
}

/// Radius-r ball law of the unconditioned Poisson(1) Galton-Watson tree:
/// e^{-|V|+|T_r|} / |Stab_T| when height == r, e^{-|V|} / |Stab_T| when the
/// tree dies out earlier (|T_r| = 0), 0 when height > r.
double limit_prob_unconditional(const RootedShape& shape, int r);

/// P(a Poisson(1) Galton-Watson tree survives n generations):
/// p_0 = 1, p_n = 1 - exp(-p_{n-1}).
double survival_prob(long n);

inline constexpr int kMaxEnumeratedVertices = 16;

struct ShapeFilter {
  std::optional<int> exact_height;
  std::optional<int> max_height;
};

/// All rooted shapes with at most max_vertices vertices, one per isomorphism
/// class, ordered by size then code. Throws LimitExceeded above 16 vertices.
std::vector<RootedShape> enumerate_shapes(int max_vertices, ShapeFilter filter = {});

/// Probability table keyed by canonical code, with the mass it leaves out.
struct LimitLaw {
  int radius = 0;
  int max_vertices = 0;
  std::map<CanonicalCode, double> probability;
  double covered_mass = 0.0;  // sum of the table
};

LimitLaw conditioned_law(int r, int max_vertices);
LimitLaw unconditional_law(int r, int max_vertices);

}  // namespace ustlocal
