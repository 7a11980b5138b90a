#include "ustlocal/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ustlocal/error.hpp"

namespace ustlocal {

double limit_prob_conditioned(const RootedShape& shape, int r) {
  if (r < 1) throw InvalidParams("conditioned law needs r >= 1");
  if (shape.height() != r) return 0.0;
  const double last = shape.last_level_count();
  return std::exp(std::log(last) - shape.size() + last - shape.log_stab_order());
}

double limit_prob_unconditional(const RootedShape& shape, int r) {
  if (r < 0) throw InvalidParams("radius must be nonnegative");
  if (shape.height() > r) return 0.0;
  const double last = shape.height() == r ? shape.last_level_count() : 0.0;
  return std::exp(-shape.size() + last - shape.log_stab_order());
}

double survival_prob(long n) {
  if (n < 0) throw InvalidParams("survival_prob needs n >= 0");
  double p = 1.0;
  for (long i = 0; i < n; ++i) p = -std::expm1(-p);
  return p;
}

std::vector<RootedShape> enumerate_shapes(int max_vertices, ShapeFilter filter) {
  if (max_vertices > kMaxEnumeratedVertices)
    throw LimitExceeded("enumerate_shapes supports at most " + std::to_string(kMaxEnumeratedVertices) +
                        " vertices");
  if (max_vertices < 1) return {};
  const int height_cap =
      filter.max_height ? *filter.max_height
                        : (filter.exact_height ? *filter.exact_height : max_vertices);

  // by_size[s]: every shape on s vertices with height <= height_cap, in code order.
  std::vector<std::vector<RootedShape>> by_size(static_cast<std::size_t>(max_vertices) + 1);
  by_size[1].push_back(RootedShape());
  // Candidate children for a root: shapes of height <= height_cap - 1.
  std::vector<RootedShape> pool;
  for (int s = 2; s <= max_vertices; ++s) {
    pool.clear();
    for (int t = 1; t < s; ++t)
      for (const auto& shape : by_size[t])
        if (shape.height() < height_cap) pool.push_back(shape);
    // Multisets of pool entries (non-increasing index) with total size s-1.
    std::vector<RootedShape> chosen;
    const auto pick = [&](auto&& self, std::size_t limit, int remaining) -> void {
      if (remaining == 0) {
        by_size[s].push_back(RootedShape::join(chosen));
        return;
      }
      for (std::size_t i = limit; i-- > 0;) {
        if (pool[i].size() > remaining) continue;
        chosen.push_back(pool[i]);
        self(self, i + 1, remaining - pool[i].size());
        chosen.pop_back();
      }
    };
    pick(pick, pool.size(), s - 1);
    std::sort(by_size[s].begin(), by_size[s].end());
  }

  std::vector<RootedShape> out;
  for (const auto& group : by_size)
    for (const auto& shape : group) {
      if (filter.exact_height && shape.height() != *filter.exact_height) continue;
      if (filter.max_height && shape.height() > *filter.max_height) continue;
      out.push_back(shape);
    }
  return out;
}

LimitLaw conditioned_law(int r, int max_vertices) {
  LimitLaw law{r, max_vertices, {}, 0.0};
  for (const auto& shape : enumerate_shapes(max_vertices, {.exact_height = r, .max_height = {}})) {
    const double p = limit_prob_conditioned(shape, r);
    law.probability.emplace(shape.code(), p);
    law.covered_mass += p;
  }
  return law;
}

LimitLaw unconditional_law(int r, int max_vertices) {
  LimitLaw law{r, max_vertices, {}, 0.0};
  for (const auto& shape : enumerate_shapes(max_vertices, {.exact_height = {}, .max_height = r})) {
    const double p = limit_prob_unconditional(shape, r);
    law.probability.emplace(shape.code(), p);
    law.covered_mass += p;
  }
  return law;
}

}  // namespace ustlocal
