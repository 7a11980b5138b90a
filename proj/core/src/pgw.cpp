#include "ustlocal/pgw.hpp"

#include <array>
#include <cmath>

#include "ustlocal/error.hpp"

namespace ustlocal {

namespace {

constexpr int kTableSize = 31;

const std::array<double, kTableSize>& poisson_cdf() {
  static const auto table = [] {
    std::array<double, kTableSize> cdf{};
    double pmf = std::exp(-1.0), total = 0.0;
    for (int k = 0; k < kTableSize; ++k) {
      total += pmf;
      cdf[k] = total;
      pmf /= k + 1;
    }
    return cdf;
  }();
  return table;
}

}  // namespace

int poisson1(Rng& rng) {
  const auto& cdf = poisson_cdf();
  const double u = uniform01(rng);
  for (int k = 0; k < kTableSize; ++k)
    if (u < cdf[k]) return k;
  // Beyond 30 the table has run out of precision; keep summing terms.
  double total = cdf[kTableSize - 1];
  double pmf = std::exp(-1.0 - std::lgamma(kTableSize + 1.0));
  int k = kTableSize;
  while (u >= total && pmf > 0.0) {
    total += pmf;
    if (u < total) return k;
    ++k;
    pmf /= k;
  }
  return k;
}

RootedShape sample_pgw(Rng& rng, int truncate_depth) {
  if (truncate_depth < 0) throw InvalidParams("truncate depth must be nonnegative");
  if (truncate_depth == 0) return RootedShape();
  const int kids = poisson1(rng);
  std::vector<RootedShape> children;
  children.reserve(static_cast<std::size_t>(kids));
  for (int i = 0; i < kids; ++i) children.push_back(sample_pgw(rng, truncate_depth - 1));
  return RootedShape::join(std::move(children));
}

RootedShape sample_pgw_conditioned(Rng& rng, int r) {
  if (r < 0) throw InvalidParams("radius must be nonnegative");
  // Build from the spine tip upward.
  RootedShape below;
  for (int depth = r - 1; depth >= 0; --depth) {
    std::vector<RootedShape> children{below};
    const int extra = poisson1(rng);
    for (int i = 0; i < extra; ++i) children.push_back(sample_pgw(rng, r - depth - 1));
    below = RootedShape::join(std::move(children));
  }
  return below;
}

}  // namespace ustlocal
