#include "ustlocal/harness/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ustlocal/error.hpp"

namespace ustlocal::harness {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, const char*> kKinds[] = {
    {ExperimentKind::local_limit, "local_limit"}, {ExperimentKind::foster, "foster"},
    {ExperimentKind::tail, "tail"},               {ExperimentKind::diameter, "diameter"},
    {ExperimentKind::verify_core, "verify_core"},
};

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

GraphSpec graph_from_json(const json& j) {
  GraphSpec spec;
  spec.family = parse_family(j.at("family").get<std::string>());
  for (const auto& [key, value] : j.items())
    if (key != "family") spec.params[key] = value.get<long>();
  return spec;
}

}  // namespace

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& [kind, text] : kKinds)
    if (name == text) return kind;
  if (name == "verify") return ExperimentKind::verify_core;
  throw InvalidParams("unknown experiment '" + std::string(name) + "'");
}

const char* experiment_name(ExperimentKind kind) {
  for (const auto& [k, text] : kKinds)
    if (k == kind) return text;
  return "unknown";
}

void set_graph(ExperimentConfig& config, std::string_view text) {
  const std::string s(text);
  if (!s.empty() && s.front() == '{') {
    config.graph = graph_from_json(json::parse(s));
    config.graph_file.reset();
    return;
  }
  try {
    config.graph = parse_short_graph_name(s);
    config.graph_file.reset();
    return;
  } catch (const InvalidParams&) {
  }
  if (!std::filesystem::exists(s)) throw InvalidParams("graph '" + s + "' is neither a known name nor a file");
  config.graph_file = s;
  config.graph.reset();
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  try {
    if (j.contains("experiment")) c.kind = parse_experiment_kind(j.at("experiment").get<std::string>());
    if (j.contains("graph")) {
      const auto& g = j.at("graph");
      if (g.is_object()) c.graph = graph_from_json(g);
      else set_graph(c, g.get<std::string>());
    }
    read(j, "graph_file", c.graph_file);
    read(j, "radius", c.radius);
    read(j, "samples", c.samples);
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    read(j, "tuples", c.tuples);
    read(j, "walks", c.walks);
    read(j, "walk_steps", c.walk_steps);
    read(j, "patterns", c.patterns);
    read(j, "chain_counts", c.chain_counts);
    read(j, "max_shape_vertices", c.max_shape_vertices);
    read(j, "target_code", c.target_code);
    read(j, "nominal_degree", c.nominal_degree);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      read(t, "sigma_gate", c.tol.sigma_gate);
      read(t, "bonferroni", c.tol.bonferroni);
      read(t, "tv_cutoff", c.tol.tv_cutoff);
      read(t, "tv_max", c.tol.tv_max);
      read(t, "tv_min", c.tol.tv_min);
      read(t, "leaf_tolerance", c.tol.leaf_tolerance);
      read(t, "quenched_band", c.tol.quenched_band);
      read(t, "quenched_min_fraction", c.tol.quenched_min_fraction);
      read(t, "band_constant", c.tol.band_constant);
      read(t, "good_threshold", c.tol.good_threshold);
      read(t, "tail_constant", c.tol.tail_constant);
      read(t, "tail_min_hits", c.tol.tail_min_hits);
      read(t, "identity", c.tol.identity);
      read(t, "cross_method", c.tol.cross_method);
    }
    if (j.contains("outputs")) {
      const auto& o = j.at("outputs");
      read(o, "json", c.report_json);
      read(o, "csv", c.report_csv);
      read(o, "curves", c.curves_csv);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!c.graph && !c.graph_file) throw InvalidParams("config: no graph given");
  if (c.radius < 0) throw InvalidParams("config: radius must be nonnegative");
  if (c.samples == 0) throw InvalidParams("config: samples must be positive");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.kind);
  if (c.graph) {
    json g;
    g["family"] = family_name(c.graph->family);
    for (const auto& [k, v] : c.graph->params) g[k] = v;
    j["graph"] = g;
  }
  if (c.graph_file) j["graph_file"] = *c.graph_file;
  j["radius"] = c.radius;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["tuples"] = c.tuples;
  j["walks"] = c.walks;
  j["walk_steps"] = c.walk_steps;
  j["patterns"] = c.patterns;
  j["chain_counts"] = c.chain_counts;
  j["max_shape_vertices"] = c.max_shape_vertices;
  if (c.target_code) j["target_code"] = *c.target_code;
  if (c.nominal_degree) j["nominal_degree"] = *c.nominal_degree;
  json t;
  t["sigma_gate"] = c.tol.sigma_gate;
  t["bonferroni"] = c.tol.bonferroni;
  t["tv_cutoff"] = c.tol.tv_cutoff;
  if (c.tol.tv_max) t["tv_max"] = *c.tol.tv_max;
  if (c.tol.tv_min) t["tv_min"] = *c.tol.tv_min;
  if (c.tol.leaf_tolerance) t["leaf_tolerance"] = *c.tol.leaf_tolerance;
  t["quenched_band"] = c.tol.quenched_band;
  if (c.tol.quenched_min_fraction) t["quenched_min_fraction"] = *c.tol.quenched_min_fraction;
  t["band_constant"] = c.tol.band_constant;
  if (c.tol.good_threshold) t["good_threshold"] = *c.tol.good_threshold;
  t["tail_constant"] = c.tol.tail_constant;
  t["tail_min_hits"] = c.tol.tail_min_hits;
  t["identity"] = c.tol.identity;
  t["cross_method"] = c.tol.cross_method;
  j["tolerances"] = t;
  return j.dump(2);
}

}  // namespace ustlocal::harness
