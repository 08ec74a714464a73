#include "cgc/harness/viz.hpp"

#include <map>

#include "cgc/concepts/concepts.hpp"
#include "cgc/concepts/neighborhood.hpp"
#include "cgc/error.hpp"
#include "cgc/harness/csv.hpp"
#include "cgc/harness/datasets.hpp"

namespace cgc::harness {
namespace {

std::string bit_string(const concepts::Bits& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

ConceptViz concept_viz(model::Model& model, const model::TaskData& data, int layer, int concept_id,
                       std::size_t max_instances) {
  if (layer < 1 || static_cast<std::size_t>(layer) > model.n_layers()) {
    throw ParameterError("viz: layer must lie in [1, " + std::to_string(model.n_layers()) + "], got " +
                         std::to_string(layer));
  }
  const model::Batch batch = data.full();
  diff::Tape tape;
  const auto fr = model::forward(model, tape, batch, true);
  const auto l = static_cast<std::size_t>(layer - 1);
  const auto current = concepts::binarize(fr.layer_q[l].value());
  const auto previous = concepts::binarize(l == 0 ? fr.input_q.value() : fr.layer_q[l - 1].value());

  if (concept_id < 0 || static_cast<std::size_t>(concept_id) >= current.table.size()) {
    std::string ids;
    for (std::size_t i = 0; i < current.table.size(); ++i) ids += (i ? ", " : "") + std::to_string(i);
    throw ValidationError("viz: no concept " + std::to_string(concept_id) + " at layer " + std::to_string(layer) +
                          "; available ids: " + ids);
  }

  // Incoming weight per (src, dst) at this layer.
  const auto& diag = fr.diagnostics[l];
  const std::vector<double>& weights = diag.edges ? diag.edges->attention : batch.edges.structural;
  std::map<std::pair<int, int>, double> incoming;
  for (std::size_t e = 0; e < batch.edges.src.size(); ++e) {
    incoming[{batch.edges.src[e], batch.edges.dst[e]}] = weights[e];
  }
  const graph::Graph g = data.task() == model::Task::kNode ? data.graph() : union_graph(data.graph_set());

  const std::string name = "concept_l" + std::to_string(layer) + "_c" + std::to_string(concept_id);
  std::string dot = "digraph " + name + " {\n";
  dot += "  graph [label=\"layer " + std::to_string(layer) + ", concept " + std::to_string(concept_id) + " (" +
         bit_string(current.table.bits(concept_id)) + ")\"];\n";
  dot += "  node [style=filled, fontcolor=white];\n";

  nlohmann::json instances = nlohmann::json::array();
  std::size_t shown = 0;
  for (std::size_t v = 0; v < current.encodings.size() && shown < max_instances; ++v) {
    if (current.encodings[v].concept_id != concept_id) continue;
    const auto center = static_cast<graph::NodeId>(v);
    const auto hood = concepts::p_hop_neighborhood(g, center, layer);
    const std::string prefix = "i" + std::to_string(shown) + "_";
    dot += "  subgraph cluster_" + std::to_string(shown) + " {\n";
    dot += "    label=\"node " + std::to_string(center) + "\";\n";

    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t k = 0; k < hood.nodes.size(); ++k) {
      const auto id = hood.nodes[k];
      const int prev = previous.encodings[static_cast<std::size_t>(id)].concept_id;
      const char* role = k == 0 ? "concept" : hood.distance[k] == 1 ? "focal" : "context";
      const char* colour = k == 0 ? kConceptColour : hood.distance[k] == 1 ? kFocalColour : kContextColour;
      std::string label = std::to_string(id) + "\\nc" + std::to_string(prev);
      nlohmann::json jn{{"id", id}, {"distance", hood.distance[k]}, {"role", role}, {"previous_concept", prev}};
      if (hood.distance[k] <= 1) {
        const double w = incoming.at({id, center});
        label += "\\n" + short_number(w);
        jn["weight"] = w;
      }
      dot += "    " + prefix + std::to_string(id) + " [label=\"" + label + "\", fillcolor=" + colour + "];\n";
      nodes.push_back(std::move(jn));
    }
    const std::string c = prefix + std::to_string(center);
    dot += "    " + c + " -> " + c + " [label=\"" + short_number(incoming.at({center, center})) + "\"];\n";
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : hood.edges) {
      const auto u = hood.nodes[a], w = hood.nodes[b];
      edges.push_back({u, w});
      const std::string su = prefix + std::to_string(u), sw = prefix + std::to_string(w);
      if (a == 0 || b == 0) {
        const auto nb = a == 0 ? w : u;
        dot += "    " + prefix + std::to_string(nb) + " -> " + c + " [label=\"" +
               short_number(incoming.at({nb, center})) + "\"];\n";
      } else {
        dot += "    " + su + " -> " + sw + " [dir=none];\n";
      }
    }
    dot += "  }\n";
    instances.push_back({{"node", center}, {"nodes", nodes}, {"edges", edges}});
    ++shown;
  }
  dot += "}\n";

  ConceptViz out;
  out.dot = std::move(dot);
  out.json = {{"layer", layer},
              {"concept_id", concept_id},
              {"bits", bit_string(current.table.bits(concept_id))},
              {"radius", layer},
              {"weights", diag.edges ? "attention" : "structural"},
              {"instances", instances}};
  return out;
}

void export_concept_viz(model::Model& model, const model::TaskData& data, int layer, int concept_id,
                        const std::filesystem::path& stem, std::size_t max_instances) {
  const auto viz = concept_viz(model, data, layer, concept_id, max_instances);
  auto dot_path = stem;
  dot_path += ".dot";
  auto json_path = stem;
  json_path += ".json";
  write_text(dot_path, viz.dot);
  write_text(json_path, viz.json.dump(2) + "\n");
}

}  // namespace cgc::harness
