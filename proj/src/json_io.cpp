#include "thresholds/json_io.hpp"

#include <fstream>
#include <sstream>

namespace thresholds {

namespace {

const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object())
    throw ValidationError(std::string(what) + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end())
    throw ValidationError(std::string(what) + ": missing field \"" + key +
                          "\"");
  return *it;
}

int require_int(const json& j, const char* key, const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_number_integer())
    throw ValidationError(std::string(what) + ": field \"" + key +
                          "\" must be an integer");
  return v.get<int>();
}

std::vector<std::vector<int>> require_int_lists(const json& j, const char* key,
                                                const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_array())
    throw ValidationError(std::string(what) + ": field \"" + key +
                          "\" must be an array");
  std::vector<std::vector<int>> out;
  for (const auto& row : v) {
    if (!row.is_array())
      throw ValidationError(std::string(what) + ": entries of \"" + key +
                            "\" must be arrays of integers");
    std::vector<int> r;
    for (const auto& x : row) {
      if (!x.is_number_integer())
        throw ValidationError(std::string(what) + ": entries of \"" + key +
                              "\" must be arrays of integers");
      r.push_back(x.get<int>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

MonotoneFamily family_from_json(const json& j) {
  int n = require_int(j, "n", "family");
  if (n < 1 || n > kMaxGroundSet)
    throw ValidationError("family: n must be in [1, 64], got " +
                          std::to_string(n));
  auto lists = require_int_lists(j, "minimal_sets", "family");
  std::vector<Mask> sets;
  for (const auto& row : lists) sets.push_back(elements_to_mask(row, n));
  return MonotoneFamily::from_sets(n, sets);
}

json family_to_json(const MonotoneFamily& f) {
  json j;
  j["n"] = f.n();
  json sets = json::array();
  for (Mask m : f.minimal_sets()) sets.push_back(mask_to_elements(m));
  j["minimal_sets"] = std::move(sets);
  return j;
}

GraphSpec graph_from_json(const json& j) {
  int v = require_int(j, "vertices", "graph");
  auto lists = require_int_lists(j, "edges", "graph");
  std::vector<std::pair<int, int>> edges;
  for (const auto& row : lists) {
    if (row.size() != 2)
      throw ValidationError("graph: every edge must have exactly 2 endpoints");
    edges.emplace_back(row[0], row[1]);
  }
  return GraphSpec::make(v, std::move(edges));
}

json graph_to_json(const GraphSpec& g) {
  json j;
  j["vertices"] = g.v;
  json edges = json::array();
  for (auto [a, b] : g.edges) edges.push_back(json::array({a, b}));
  j["edges"] = std::move(edges);
  return j;
}

HypergraphSpec hypergraph_from_json(const json& j) {
  int n = require_int(j, "n", "hypergraph");
  int k = require_int(j, "k", "hypergraph");
  auto lists = require_int_lists(j, "edges", "hypergraph");
  return HypergraphSpec::make(n, k, std::move(lists));
}

json hypergraph_to_json(const HypergraphSpec& hg) {
  json j;
  j["n"] = hg.n;
  j["k"] = hg.k;
  j["edges"] = hg.edges;
  return j;
}

json witness_to_json(const CoverWitness& w) {
  json j;
  j["q"] = w.q;
  j["cost"] = w.cost;
  json g = json::array();
  for (Mask m : w.generator.sets) g.push_back(mask_to_elements(m));
  j["G"] = std::move(g);
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is a 1-based offset into the input; report the line too.
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ValidationError(path + ": parse error at line " +
                          std::to_string(line) + ": " + e.what());
  }
}

MonotoneFamily load_family(const std::string& path) {
  return family_from_json(load_json_file(path));
}

GraphSpec load_graph(const std::string& path) {
  return graph_from_json(load_json_file(path));
}

HypergraphSpec load_hypergraph(const std::string& path) {
  return hypergraph_from_json(load_json_file(path));
}

}  // namespace thresholds
