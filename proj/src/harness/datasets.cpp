#include "cgc/harness/datasets.hpp"

#include <algorithm>

#include "cgc/error.hpp"
#include "cgc/graph/generators.hpp"
#include "cgc/graph/tu_format.hpp"

namespace cgc::harness {

const std::vector<std::string>& node_datasets() {
  static const std::vector<std::string> v{"ba_shapes", "ba_community", "ba_grid", "tree_cycles", "tree_grid"};
  return v;
}

const std::vector<std::string>& graph_datasets() {
  static const std::vector<std::string> v{"grid", "grid_house", "stars", "house_colour"};
  return v;
}

const std::vector<std::string>& real_world_datasets() {
  static const std::vector<std::string> v{"mutagenicity", "reddit_binary"};
  return v;
}

std::vector<std::string> all_datasets() {
  std::vector<std::string> out = node_datasets();
  out.insert(out.end(), graph_datasets().begin(), graph_datasets().end());
  out.insert(out.end(), real_world_datasets().begin(), real_world_datasets().end());
  return out;
}

bool is_real_world(std::string_view name) {
  const auto& v = real_world_datasets();
  return std::find(v.begin(), v.end(), name) != v.end();
}

std::string tu_name(std::string_view name) {
  if (name == "mutagenicity") return "Mutagenicity";
  if (name == "reddit_binary") return "REDDIT-BINARY";
  throw ParameterError("'" + std::string(name) + "' is not a real-world dataset");
}

model::TaskData load_dataset(std::string_view name, std::uint64_t data_seed,
                             const std::optional<std::filesystem::path>& tu_dir) {
  const auto& nodes = node_datasets();
  if (std::find(nodes.begin(), nodes.end(), name) != nodes.end()) {
    return model::TaskData::node_task(std::string(name),
                                      graph::build_node_dataset(graph::parse_node_dataset(name), data_seed));
  }
  if (is_real_world(name)) {
    if (!tu_dir) throw IoError(std::string(name) + " needs --tu-dir pointing at the TU dataset files");
    auto set = graph::load_tu(*tu_dir / tu_name(name));
    set.name = std::string(name);
    return model::TaskData::graph_task(std::move(set));
  }
  auto set = graph::build_graph_dataset(graph::parse_graph_dataset(name), data_seed);
  return model::TaskData::graph_task(std::move(set));
}

bool dataset_available(std::string_view name, const std::optional<std::filesystem::path>& tu_dir) {
  if (!is_real_world(name)) return true;
  if (!tu_dir) return false;
  std::error_code ec;
  return std::filesystem::is_directory(*tu_dir / tu_name(name), ec);
}

graph::Graph union_graph(const graph::GraphSet& set) {
  graph::Graph out;
  const std::size_t width = set.n_features();
  std::size_t total = 0;
  for (const auto& g : set.graphs) total += g.n_nodes();
  out.features = diff::Tensor::matrix(total, width);
  for (const auto& g : set.graphs) {
    const auto base = out.add_nodes(g.n_nodes());
    for (const auto& [u, v] : g.edges()) out.add_edge(base + u, base + v);
    for (std::size_t i = 0; i < g.n_nodes(); ++i) {
      for (std::size_t k = 0; k < width; ++k) out.features(static_cast<std::size_t>(base) + i, k) = g.features(i, k);
    }
  }
  return out;
}

}  // namespace cgc::harness
