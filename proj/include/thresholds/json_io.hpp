#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "thresholds/cover.hpp"
#include "thresholds/family.hpp"
#include "thresholds/graphs.hpp"
#include "thresholds/simulate.hpp"

namespace thresholds {

// Plain nlohmann::json keeps object keys sorted, which doubles as the
// canonical key order for all emitted documents.
using json = nlohmann::json;

// {"n": 3, "minimal_sets": [[0,1],[0,2],[1,2]]}; input order-insensitive,
// output canonical.
MonotoneFamily family_from_json(const json& j);
json family_to_json(const MonotoneFamily& f);

// {"vertices": 4, "edges": [[0,1],[1,2]]}
GraphSpec graph_from_json(const json& j);
json graph_to_json(const GraphSpec& g);

// {"n": 6, "k": 3, "edges": [[0,1,2],[3,4,5]]}
HypergraphSpec hypergraph_from_json(const json& j);
json hypergraph_to_json(const HypergraphSpec& hg);

// {"q": ..., "cost": ..., "G": [[...], ...]}
json witness_to_json(const CoverWitness& w);

// Read and parse a file, wrapping parse failures in ValidationError with
// line diagnostics.
json load_json_file(const std::string& path);
MonotoneFamily load_family(const std::string& path);
GraphSpec load_graph(const std::string& path);
HypergraphSpec load_hypergraph(const std::string& path);

}  // namespace thresholds
