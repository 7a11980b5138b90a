#include <gtest/gtest.h>

#include <sstream>

#include "ustlocal/error.hpp"
#include "ustlocal/generators.hpp"
#include "ustlocal/harness/cli.hpp"
#include "ustlocal/harness/config.hpp"
#include "ustlocal/harness/experiments.hpp"
#include "ustlocal/harness/parallel.hpp"
#include "ustlocal/harness/report.hpp"

using namespace ustlocal;
using namespace ustlocal::harness;

namespace {

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

TEST(Parallel, ResultsIndependentOfThreads) {
  const auto draw = [](std::size_t, Rng& rng) { return rng(); };
  const auto one = run_tasks<std::uint64_t>(50, 1, 9, 100, draw);
  const auto four = run_tasks<std::uint64_t>(50, 4, 9, 100, draw);
  EXPECT_EQ(one, four);
  EXPECT_EQ(one[3], derive_rng(9, 103)());
}

TEST(Parallel, RethrowsTaskFailure) {
  const auto fail = [](std::size_t i, Rng&) -> int {
    if (i == 7) throw InvalidParams("task 7");
    return 0;
  };
  EXPECT_THROW(run_tasks<int>(20, 3, 1, 0, fail), InvalidParams);
}

TEST(Parallel, SampledTreesIndependentOfThreads) {
  const Network q4 = hypercube_graph(4);
  EXPECT_EQ(sample_trees(q4, 30, 5, 0, 1), sample_trees(q4, 30, 5, 0, 3));
}

TEST(Parallel, Chunks) {
  const auto chunks = make_chunks(10, 4);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks.back().begin, 8u);
  EXPECT_EQ(chunks.back().end, 10u);
}

TEST(Config, RoundTrip) {
  const auto config = parse_config(R"({
    "experiment": "local_limit",
    "graph": {"family": "random_regular", "n": 500, "d": 20},
    "radius": 2, "samples": 30, "seed": 77, "threads": 2,
    "tolerances": {"tv_max": 0.05, "sigma_gate": 5}
  })");
  EXPECT_EQ(config.kind, ExperimentKind::local_limit);
  EXPECT_EQ(config.radius, 2);
  EXPECT_EQ(config.graph->param("d"), 20);
  EXPECT_EQ(config.tol.tv_max, 0.05);
  EXPECT_EQ(config.tol.sigma_gate, 5.0);
  const std::string json = config_to_json(config);
  EXPECT_EQ(config_to_json(parse_config(json)), json);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("{"), ParseError);
  EXPECT_THROW(parse_config(R"({"experiment": "nope"})"), InvalidParams);
  EXPECT_THROW(parse_experiment_kind("nope"), InvalidParams);
  ExperimentConfig config;
  set_graph(config, "k4");
  EXPECT_EQ(config.graph->family, Family::complete);
}

TEST(Report, GatesAndSerialization) {
  ExperimentReport report;
  report.add_abs("exact", 1.0, 1.0 + 1e-12, 1e-9);
  report.add_z("z", 0.5, 0.4, 0.05, 4.0);
  report.add_within("range", 3.0, 1.0, 2.0, false);
  EXPECT_TRUE(report.passed());
  report.add_at_most("bound", 2.0, 1.0);
  EXPECT_FALSE(report.passed());
  EXPECT_FALSE(report.find("bound")->pass);
  const std::string csv = report_to_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,observed,predicted,sigma,pass");
  EXPECT_NE(report_to_json(report).find("\"bound\""), std::string::npos);
  EXPECT_DOUBLE_EQ(bonferroni_gate(4.0, 1), 4.0);
  EXPECT_GT(bonferroni_gate(4.0, 50), 4.0);
}

TEST(Experiments, ReportsIdenticalAcrossThreadCounts) {
  auto config = parse_config(R"({"experiment": "local_limit",
    "graph": {"family": "complete", "n": 60}, "radius": 1, "samples": 12, "seed": 3})");
  config.threads = 1;
  const std::string one = report_to_json(run_experiment(config));
  config.threads = 3;
  EXPECT_EQ(report_to_json(run_experiment(config)), one);
}

TEST(Experiments, VerifyCorePassesOnSmallGraphs) {
  for (const char* graph : {"k4", "c5"}) {
    ExperimentConfig config;
    config.kind = ExperimentKind::verify_core;
    config.samples = 20000;
    set_graph(config, graph);
    const auto report = run_experiment(config);
    for (const auto& r : report.records) EXPECT_TRUE(r.pass || !r.gated) << graph << " " << r.name;
  }
}

TEST(Cli, ExitCodes) {
  std::string out;
  EXPECT_EQ(cli({"resistance", "--graph", "k4", "--u", "0", "--v", "1"}, &out), kExitOk);
  EXPECT_NE(out.find("0.5"), std::string::npos);
  EXPECT_EQ(cli({"theory", "--code", "(())", "--r", "1"}), kExitOk);
  EXPECT_EQ(cli({"verify", "--graph", "k4", "--samples", "5000"}), kExitOk);
  EXPECT_EQ(cli({}), kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}), kExitUsage);
  EXPECT_EQ(cli({"sample", "--graph", "banana"}), kExitUsage);
  EXPECT_EQ(cli({"theory", "--code", "(("}), kExitUsage);
  EXPECT_EQ(cli({"resistance", "--graph", "k4", "--u", "0", "--v", "9"}), kExitUsage);
}

TEST(Cli, SameSeedSameOutput) {
  std::string a, b, c;
  cli({"--seed", "7", "sample", "--graph", "q3", "--count", "5"}, &a);
  cli({"--seed", "7", "--threads", "2", "sample", "--graph", "q3", "--count", "5"}, &b);
  cli({"--seed", "8", "sample", "--graph", "q3", "--count", "5"}, &c);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}
