#pragma once

#include <optional>

#include <json.hpp>

#include "cgc/graph/graph.hpp"

namespace cgc::graph {

// {n_nodes, edges: [[i, j], ...], features: [[...]], node_labels, graph_label, motif_mask}
nlohmann::json to_json(const Graph& g, std::optional<std::int32_t> graph_label = std::nullopt);
Graph graph_from_json(const nlohmann::json& j);

// {name, graphs: [graph schema with graph_label, ...]}
nlohmann::json to_json(const GraphSet& set);
GraphSet graph_set_from_json(const nlohmann::json& j);

}  // namespace cgc::graph
