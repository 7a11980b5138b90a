#pragma once

#include "ustlocal/random.hpp"
#include "ustlocal/rooted_shape.hpp"

namespace ustlocal {

/// Poisson(1) variate by inversion (cached CDF up to 30, exact beyond).
int poisson1(Rng& rng);

/// Poisson(1) Galton-Watson tree cut at depth `truncate_depth`.
RootedShape sample_pgw(Rng& rng, int truncate_depth);

/// Depth-r ball of the tree conditioned to survive: an r-step spine where each
/// spine vertex also carries Poisson(1) independent unconditioned subtrees,
/// truncated at the remaining depth.
RootedShape sample_pgw_conditioned(Rng& rng, int r);

}  // namespace ustlocal
