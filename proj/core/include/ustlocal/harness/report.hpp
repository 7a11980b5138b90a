#pragma once

#include <map>
#include <string>
#include <vector>

#include "ustlocal/harness/config.hpp"

namespace ustlocal::harness {

/// One observed-vs-predicted comparison. `sigma` holds the standard error for
/// z-gated checks and the allowed deviation for tolerance checks.
struct CheckRecord {
  std::string name;
  double observed = 0.0;
  double predicted = 0.0;
  double sigma = 0.0;
  bool gated = true;
  bool pass = true;
  std::string rule;  // "z<=4.00", "abs<=1e-09", "<=", ">=", "in[0.5,5]", ...
};

/// A named table of plot-ready rows (tail curves, histograms).
struct Curve {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string experiment;
  std::string graph;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;
  std::map<std::string, double> metrics;  // ungated numbers worth keeping
  std::map<std::string, std::string> notes;
  std::vector<Curve> curves;
  std::optional<double> wall_seconds;  // only set when asked; breaks byte identity

  /// Aggregate verdict: every gated record passes.
  bool passed() const;

  CheckRecord& add(CheckRecord record);
  CheckRecord& add_z(std::string name, double observed, double predicted, double sigma,
                     double gate, bool gated = true);
  CheckRecord& add_abs(std::string name, double observed, double predicted, double tolerance,
                       bool gated = true);
  CheckRecord& add_at_most(std::string name, double observed, double bound, double slack = 0.0,
                           bool gated = true);
  CheckRecord& add_at_least(std::string name, double observed, double bound, double slack = 0.0,
                            bool gated = true);
  CheckRecord& add_within(std::string name, double observed, double lo, double hi,
                          bool gated = true);

  const CheckRecord* find(const std::string& name) const;

  /// Merges another report's records, prefixing their names.
  void absorb(const ExperimentReport& other, const std::string& prefix);
};

std::string report_to_json(const ExperimentReport& report);
/// check,observed,predicted,sigma,pass
std::string report_to_csv(const ExperimentReport& report);
/// curve,<columns...> blocks, one per curve.
std::string curves_to_csv(const ExperimentReport& report);

/// z gate after Bonferroni correction across `comparisons` two-sided tests at
/// the family-wise level of a single `sigmas` test.
double bonferroni_gate(double sigmas, std::size_t comparisons);

}  // namespace ustlocal::harness
