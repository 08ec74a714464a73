#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cgc/diff/tensor.hpp"

namespace cgc::graph {

using NodeId = std::int32_t;

// Undirected simple graph with node features and optional per-node
// annotations. Edges are stored once as (min, max) in insertion order; the
// directed view lists both orientations.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n_nodes);

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_edges() const { return edges_.size(); }
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

  // Appends isolated nodes and returns the id of the first one.
  NodeId add_nodes(std::size_t count);
  // False for self-loops and duplicates.
  bool add_edge(NodeId u, NodeId v);
  bool has_edge(NodeId u, NodeId v) const;

  std::vector<std::pair<NodeId, NodeId>> directed_edges() const;
  std::vector<std::vector<NodeId>> adjacency() const;
  std::vector<std::size_t> degrees() const;

  // Raw node features [n x F].
  diff::Tensor features;
  // Class id per node; empty when the graph has no node labels.
  std::vector<std::int32_t> node_labels;
  // Ground-truth motif membership per node; empty when unknown.
  std::vector<std::uint8_t> motif_mask;

  // Throws ValidationError when an invariant is broken.
  void validate() const;

 private:
  static std::uint64_t key(NodeId u, NodeId v);

  std::size_t n_nodes_ = 0;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::unordered_set<std::uint64_t> edge_keys_;
};

// Number of connected components (BFS).
std::size_t connected_components(const Graph& g);
bool is_connected(const Graph& g);

// A labelled collection of graphs for graph classification.
struct GraphSet {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<std::int32_t> graph_labels;

  std::size_t size() const { return graphs.size(); }
  std::size_t n_features() const;
  std::size_t n_classes() const;
  double mean_graph_size() const;
  void validate() const;
};

}  // namespace cgc::graph
