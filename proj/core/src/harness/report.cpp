#include "ustlocal/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "ustlocal/graph_io.hpp"

namespace ustlocal::harness {

namespace {

std::string fixed(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

// JSON has no inf/nan; keep them readable as strings.
nlohmann::json number(double value) {
  if (std::isfinite(value)) return value;
  return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
}

}  // namespace

bool ExperimentReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return !r.gated || r.pass; });
}

CheckRecord& ExperimentReport::add(CheckRecord record) {
  records.push_back(std::move(record));
  return records.back();
}

CheckRecord& ExperimentReport::add_z(std::string name, double observed, double predicted,
                                     double sigma, double gate, bool gated) {
  const double dev = std::abs(observed - predicted);
  const bool pass = sigma > 0.0 ? dev <= gate * sigma : dev <= 1e-12 * std::max(1.0, std::abs(predicted));
  return add({std::move(name), observed, predicted, sigma, gated, pass, "z<=" + fixed("%.2f", gate)});
}

CheckRecord& ExperimentReport::add_abs(std::string name, double observed, double predicted,
                                       double tolerance, bool gated) {
  const bool pass = std::abs(observed - predicted) <= tolerance;
  return add({std::move(name), observed, predicted, tolerance, gated, pass, "abs<=" + format_double(tolerance)});
}

CheckRecord& ExperimentReport::add_at_most(std::string name, double observed, double bound,
                                           double slack, bool gated) {
  return add({std::move(name), observed, bound, slack, gated, observed <= bound + slack, "<="});
}

CheckRecord& ExperimentReport::add_at_least(std::string name, double observed, double bound,
                                            double slack, bool gated) {
  return add({std::move(name), observed, bound, slack, gated, observed >= bound - slack, ">="});
}

CheckRecord& ExperimentReport::add_within(std::string name, double observed, double lo, double hi,
                                          bool gated) {
  return add({std::move(name), observed, 0.5 * (lo + hi), 0.5 * (hi - lo), gated,
              observed >= lo && observed <= hi, "in[" + format_double(lo) + "," + format_double(hi) + "]"});
}

const CheckRecord* ExperimentReport::find(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

void ExperimentReport::absorb(const ExperimentReport& other, const std::string& prefix) {
  for (auto r : other.records) {
    r.name = prefix + r.name;
    records.push_back(std::move(r));
  }
  for (const auto& [k, v] : other.metrics) metrics[prefix + k] = v;
  for (const auto& [k, v] : other.notes) notes[prefix + k] = v;
  for (auto c : other.curves) {
    c.name = prefix + c.name;
    curves.push_back(std::move(c));
  }
}

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["experiment"] = report.experiment;
  j["graph"] = report.graph;
  j["seed"] = report.seed;
  j["pass"] = report.passed();
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["observed"] = number(r.observed);
    c["predicted"] = number(r.predicted);
    c["sigma"] = number(r.sigma);
    c["rule"] = r.rule;
    c["gated"] = r.gated;
    c["pass"] = r.pass;
    checks.push_back(std::move(c));
  }
  auto& metrics = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = number(v);
  if (!report.notes.empty()) {
    auto& notes = j["notes"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.notes) notes[k] = v;
  }
  if (report.wall_seconds) j["wall_seconds"] = *report.wall_seconds;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "check,observed,predicted,sigma,pass\n";
  for (const auto& r : report.records)
    out << r.name << ',' << format_double(r.observed) << ',' << format_double(r.predicted) << ','
        << format_double(r.sigma) << ',' << (r.gated ? (r.pass ? "true" : "false") : "info") << '\n';
  return out.str();
}

std::string curves_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  for (const auto& curve : report.curves) {
    out << "curve";
    for (const auto& col : curve.columns) out << ',' << col;
    out << '\n';
    for (const auto& row : curve.rows) {
      out << curve.name;
      for (const double x : row) out << ',' << format_double(x);
      out << '\n';
    }
  }
  return out.str();
}

double bonferroni_gate(double sigmas, std::size_t comparisons) {
  if (comparisons <= 1) return sigmas;
  const boost::math::normal standard;
  const double alpha = 2.0 * boost::math::cdf(boost::math::complement(standard, sigmas));
  return boost::math::quantile(boost::math::complement(standard, alpha / (2.0 * comparisons)));
}

}  // namespace ustlocal::harness
