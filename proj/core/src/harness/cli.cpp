#include "ustlocal/harness/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ustlocal/census.hpp"
#include "ustlocal/electric.hpp"
#include "ustlocal/error.hpp"
#include "ustlocal/graph_io.hpp"
#include "ustlocal/harness/experiments.hpp"
#include "ustlocal/harness/parallel.hpp"
#include "ustlocal/limit_law.hpp"
#include "ustlocal/samplers.hpp"

namespace ustlocal::harness {

namespace {

// Stream 0 belongs to graph generation.
constexpr std::uint64_t kCliStream = std::uint64_t{1} << 40;

struct GlobalOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
};

void emit(const GlobalOptions& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out);
  if (!file) throw InvalidParams("cannot write '" + g.out + "'");
  file << text;
}

std::vector<VertexId> parse_vertex_list(const std::string& text) {
  std::vector<VertexId> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(static_cast<VertexId>(std::stol(item)));
  return out;
}

LoadedGraph graph_from_option(const std::string& text, std::uint64_t seed) {
  ExperimentConfig c;
  c.seed = seed;
  set_graph(c, text);
  return load_graph(c);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uniform spanning tree local statistics and electric network checks", "ustlocal"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "Write a graph in the text edge-list format");
  std::string family;
  std::map<std::string, long> params;
  generate_cmd->add_option("--family", family, "Graph family")->required();
  for (const char* key : {"n", "d", "a", "b", "dim", "side", "dims", "m", "leaves"})
    generate_cmd->add_option_function<long>(std::string("--") + key, [&params, key](long v) { params[key] = v; },
                                            std::string("Family parameter ") + key);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample uniform spanning trees");
  std::string graph_text;
  std::size_t count = 1;
  std::string sampler = "wilson";
  sample_cmd->add_option("--graph", graph_text, "Graph name (k4, c5, ...), JSON spec, or file")->required();
  sample_cmd->add_option("--count", count, "Number of trees");
  sample_cmd->add_option("--sampler", sampler)->check(CLI::IsMember({"wilson", "aldous_broder"}));

  // census
  auto* census_cmd = app.add_subcommand("census", "Tally UST ball shapes");
  int radius = 1;
  std::size_t samples = 100;
  std::string selection = "all";
  census_cmd->add_option("--graph", graph_text)->required();
  census_cmd->add_option("--r", radius, "Ball radius");
  census_cmd->add_option("--samples", samples, "Number of trees");
  census_cmd->add_option("--selection", selection)->check(CLI::IsMember({"all", "uniform"}));

  // resistance
  auto* resistance_cmd = app.add_subcommand("resistance", "Effective resistance queries");
  VertexId u = 0, v = -1;
  std::string set_text;
  resistance_cmd->add_option("--graph", graph_text)->required();
  resistance_cmd->add_option("--u", u, "Source vertex");
  resistance_cmd->add_option("--v", v, "Target vertex");
  resistance_cmd->add_option("--set", set_text, "Comma-separated target set");

  // theory
  auto* theory_cmd = app.add_subcommand("theory", "Limit-law values for a shape");
  std::string code;
  long survival_n = -1;
  theory_cmd->add_option("--code", code, "Parenthesis code, e.g. \"(()())\"");
  theory_cmd->add_option("--r", radius, "Radius");
  theory_cmd->add_option("--survival", survival_n, "Also print p_n for this n");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Exhaustive oracle suite on a small graph");
  std::size_t verify_samples = 200000;
  verify_cmd->add_option("--graph", graph_text)->required();
  verify_cmd->add_option("--samples", verify_samples, "Monte Carlo draws per check");

  // experiment
  auto* experiment_cmd = app.add_subcommand("experiment", "Run an experiment from a JSON config");
  std::string config_path;
  experiment_cmd->add_option("--config", config_path, "Config file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const bool json_out = g.format == "json";
  try {
    if (*generate_cmd) {
      GraphSpec spec{parse_family(family), params};
      emit(g, out, format_network(generate(spec, g.seed)));
      return kExitOk;
    }

    if (*sample_cmd) {
      const LoadedGraph graph = graph_from_option(graph_text, g.seed);
      const auto trees = run_tasks<SpanningTree>(count, g.threads, g.seed, kCliStream, [&](std::size_t, Rng& rng) {
        return sampler == "wilson" ? wilson(graph.net, rng) : aldous_broder(graph.net, rng);
      });
      std::ostringstream text;
      if (json_out) {
        nlohmann::ordered_json j;
        j["graph"] = graph.description;
        j["seed"] = g.seed;
        j["sampler"] = sampler;
        auto& list = j["trees"] = nlohmann::ordered_json::array();
        for (const auto& t : trees) list.push_back({{"root", t.root()}, {"parent", t.parent()}});
        text << j.dump() << "\n";
      } else {
        text << "tree,u,v\n";
        for (std::size_t i = 0; i < trees.size(); ++i)
          for (const auto& e : trees[i].edges()) text << i << ',' << e.u << ',' << e.v << '\n';
      }
      emit(g, out, text.str());
      return kExitOk;
    }

    if (*census_cmd) {
      const LoadedGraph graph = graph_from_option(graph_text, g.seed);
      const auto mode = selection == "all" ? VertexSelection::all : VertexSelection::uniform_one;
      const auto parts = run_tasks<BallCensus>(samples, g.threads, g.seed, kCliStream, [&](std::size_t, Rng& rng) {
        BallCensus c;
        c.radius = radius;
        add_tree(c, wilson(graph.net, rng), mode, rng);
        return c;
      });
      BallCensus census{graph.description, radius, 0, 0, g.seed, {}};
      for (const auto& p : parts) {
        census.merge(p);
        census.vertices_per_sample = p.vertices_per_sample;
      }
      std::ostringstream text;
      if (json_out) {
        nlohmann::ordered_json j;
        j["graph"] = census.graph;
        j["radius"] = census.radius;
        j["samples"] = census.samples;
        j["vertices_per_sample"] = census.vertices_per_sample;
        j["seed"] = census.seed;
        j["counts"] = census.counts;
        if (radius >= 1) j["tv_conditioned"] = tv_distance(census, conditioned_law(radius, 14));
        text << j.dump(2) << "\n";
      } else {
        text << "code,count\n";
        for (const auto& [c, n] : census.counts) text << c << ',' << n << '\n';
      }
      emit(g, out, text.str());
      return kExitOk;
    }

    if (*resistance_cmd) {
      const LoadedGraph graph = graph_from_option(graph_text, g.seed);
      ResistanceValue value;
      std::string target;
      if (!set_text.empty()) {
        const auto set = parse_vertex_list(set_text);
        value = resistance_to_set(graph.net, u, set);
        target = set_text;
      } else {
        if (v < 0) throw InvalidParams("resistance needs --v or --set");
        value = resistance_pair(graph.net, u, v);
        target = std::to_string(v);
      }
      std::ostringstream text;
      if (json_out) {
        nlohmann::ordered_json j;
        j["graph"] = graph.description;
        j["u"] = u;
        j["target"] = target;
        j["resistance"] = value.value;
        j["method"] = method_name(value.method);
        text << j.dump(2) << "\n";
      } else {
        text << "u,target,resistance,method\n"
             << u << ",\"" << target << "\"," << format_double(value.value) << ',' << method_name(value.method) << '\n';
      }
      emit(g, out, text.str());
      return kExitOk;
    }

    if (*theory_cmd) {
      if (code.empty() && survival_n < 0) throw InvalidParams("theory needs --code or --survival");
      nlohmann::ordered_json j;
      if (!code.empty()) {
        const RootedShape shape = RootedShape::from_code(code);
        j["code"] = shape.code();
        j["r"] = radius;
        j["size"] = shape.size();
        j["height"] = shape.height();
        j["last_level"] = shape.last_level_count();
        j["stab_order"] = shape.stab_order().str();
        j["conditioned"] = radius >= 1 ? limit_prob_conditioned(shape, radius) : 0.0;
        j["unconditional"] = limit_prob_unconditional(shape, radius);
      }
      if (survival_n >= 0) {
        j["survival_n"] = survival_n;
        j["survival_prob"] = survival_prob(survival_n);
      }
      std::ostringstream text;
      if (json_out) {
        text << j.dump(2) << "\n";
      } else {
        for (const auto& [key, value] : j.items()) text << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
      }
      emit(g, out, text.str());
      return kExitOk;
    }

    ExperimentConfig config;
    if (*verify_cmd) {
      config.kind = ExperimentKind::verify_core;
      set_graph(config, graph_text);
      config.samples = verify_samples;
    } else {
      config = load_config(config_path);
    }
    // Command-line globals win over the config file when given explicitly.
    if (app.count("--seed")) config.seed = g.seed;
    if (app.count("--threads")) config.threads = g.threads;
    const ExperimentReport report = run_experiment(config);
    const std::string main_text = json_out ? report_to_json(report) : report_to_csv(report);
    if (!g.out.empty()) {
      emit(g, out, main_text);
    } else if (config.report_json || config.report_csv) {
      if (config.report_json) std::ofstream(*config.report_json) << report_to_json(report);
      if (config.report_csv) std::ofstream(*config.report_csv) << report_to_csv(report);
    } else {
      out << main_text;
    }
    if (config.curves_csv) std::ofstream(*config.curves_csv) << curves_to_csv(report);
    for (const auto& r : report.records)
      if (r.gated && !r.pass) err << "FAIL " << r.name << ": observed " << r.observed << " vs " << r.predicted << " (" << r.rule << ")\n";
    return report.passed() ? kExitOk : kExitGateFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace ustlocal::harness
