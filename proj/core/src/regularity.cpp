#include "ustlocal/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "ustlocal/error.hpp"

namespace ustlocal {

namespace {

double concentrated_fraction(const Network& net, int d, double delta) {
  long inside = 0;
  for (VertexId v = 0; v < net.vertex_count(); ++v)
    if (std::abs(net.degree(v) - d) <= delta * d) ++inside;
  return static_cast<double>(inside) / net.vertex_count();
}

double degree_sum_deviation(const Network& net, int d) {
  double sum = 0.0;
  for (VertexId v = 0; v < net.vertex_count(); ++v) sum += net.degree(v);
  const double target = static_cast<double>(d) * net.vertex_count();
  return std::abs(sum - target) / target;
}

}  // namespace

bool almost_regular_at(const Network& net, int d, double delta) {
  return concentrated_fraction(net, d, delta) >= 1.0 - delta &&
         degree_sum_deviation(net, d) <= delta;
}

AlmostRegularReport check_almost_regular(const Network& net, int d) {
  if (d < 1) throw InvalidParams("nominal degree must be positive");
  AlmostRegularReport report;
  report.d = d;
  report.degree_sum_deviation = degree_sum_deviation(net, d);
  if (!almost_regular_at(net, d, 0.0)) {
    double lo = 0.0;
    double hi = std::max(1.0, report.degree_sum_deviation);
    while (hi - lo > kAlmostRegularResolution) {
      const double mid = 0.5 * (lo + hi);
      (almost_regular_at(net, d, mid) ? hi : lo) = mid;
    }
    report.delta = hi;
  }
  report.concentrated_fraction = concentrated_fraction(net, d, report.delta);
  return report;
}

}  // namespace ustlocal
