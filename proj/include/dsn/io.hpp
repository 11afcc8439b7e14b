#pragma once

// JSON documents for instances, solutions, certificates and obstructions.
// Objects are emitted with sorted keys; unknown keys are rejected on input.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dsn/classify.hpp"
#include "dsn/graph.hpp"

namespace dsn {

using Json = nlohmann::json;

struct InstanceDocument {
  WeightedDigraph graph;
  Pattern pattern;
  std::vector<std::string> warnings;
};

/// Parses JSON text; syntax errors report line and column, duplicate object
/// keys are rejected.
Json parse_json_text(std::string_view text);
Json read_json_file(const std::string& path);

InstanceDocument instance_from_json(const Json& doc);
Json instance_to_json(const WeightedDigraph& graph, const Pattern& pattern);

/// Accepts {"edges": [[tail, head], ...]} with optional "cost" (checked
/// against the edges) and "omega_used".
SolutionNetwork solution_from_json(const Json& doc, const WeightedDigraph& host);
Json edges_to_json(const SolutionNetwork& network);

Json pattern_to_json(const Pattern& pattern);
Json certificate_to_json(const CaterpillarCertificate& cert);
Json obstruction_to_json(const Pattern& h, const Obstruction& obs);

}  // namespace dsn
