#include "cgc/graph/json_io.hpp"

#include "cgc/error.hpp"

namespace cgc::graph {

using nlohmann::json;

json to_json(const Graph& g, std::optional<std::int32_t> graph_label) {
  json j;
  j["n_nodes"] = g.n_nodes();
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  json features = json::array();
  for (std::size_t i = 0; i < g.features.rows(); ++i) {
    auto row = g.features.row(i);
    features.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["features"] = std::move(features);
  j["node_labels"] = g.node_labels.empty() ? json(nullptr) : json(g.node_labels);
  j["graph_label"] = graph_label ? json(*graph_label) : json(nullptr);
  j["motif_mask"] = g.motif_mask.empty() ? json(nullptr) : json(g.motif_mask);
  return j;
}

Graph graph_from_json(const json& j) {
  try {
    Graph g(j.at("n_nodes").get<std::size_t>());
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    const auto& rows = j.at("features");
    const std::size_t width = rows.empty() ? 0 : rows.at(0).size();
    g.features = diff::Tensor::matrix(g.n_nodes(), width);
    if (rows.size() != g.n_nodes()) throw ValidationError("graph JSON: feature rows differ from n_nodes");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != width) throw ValidationError("graph JSON: ragged feature rows");
      for (std::size_t c = 0; c < width; ++c) g.features(i, c) = rows[i][c].get<double>();
    }
    if (j.contains("node_labels") && !j["node_labels"].is_null()) {
      g.node_labels = j["node_labels"].get<std::vector<std::int32_t>>();
    }
    if (j.contains("motif_mask") && !j["motif_mask"].is_null()) {
      g.motif_mask = j["motif_mask"].get<std::vector<std::uint8_t>>();
    }
    g.validate();
    return g;
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
}

json to_json(const GraphSet& set) {
  json graphs = json::array();
  for (std::size_t i = 0; i < set.size(); ++i) graphs.push_back(to_json(set.graphs[i], set.graph_labels[i]));
  return json{{"name", set.name}, {"graphs", std::move(graphs)}};
}

GraphSet graph_set_from_json(const json& j) {
  GraphSet set;
  try {
    set.name = j.at("name").get<std::string>();
    for (const auto& g : j.at("graphs")) {
      set.graphs.push_back(graph_from_json(g));
      set.graph_labels.push_back(g.at("graph_label").get<std::int32_t>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph set JSON: ") + e.what());
  }
  set.validate();
  return set;
}

}  // namespace cgc::graph
