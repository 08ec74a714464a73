#pragma once

#include <span>
#include <string>
#include <vector>

#include "cgc/conv/edges.hpp"
#include "cgc/graph/graph.hpp"
#include "cgc/model/config.hpp"

namespace cgc::model {

using diff::Index;

// Inputs of one forward pass: one graph (node task) or a disjoint union of
// graphs with a node-to-graph membership (graph task).
struct Batch {
  conv::EdgeIndex edges;
  diff::Tensor features;
  // Node labels (node task) or graph labels (graph task), per item.
  std::vector<Index> labels;
  // Graph id per node; empty for node tasks.
  std::vector<Index> membership;
  std::size_t n_graphs = 0;

  std::size_t n_nodes() const { return edges.n_nodes; }
};

// A node-classification graph or a graph-classification set, with the
// self-looped edge structure precomputed.
class TaskData {
 public:
  static TaskData node_task(std::string name, graph::Graph g);
  static TaskData graph_task(graph::GraphSet set);

  Task task() const { return task_; }
  const std::string& name() const { return name_; }
  // Nodes (node task) or graphs (graph task).
  std::size_t n_items() const { return labels_.size(); }
  const std::vector<std::int32_t>& labels() const { return labels_; }
  std::size_t n_classes() const { return n_classes_; }
  std::size_t n_features() const { return n_features_; }

  const graph::Graph& graph() const;
  const graph::GraphSet& graph_set() const;

  // Node task: the whole graph (ids are ignored). Graph task: the listed graphs.
  Batch batch(std::span<const std::int32_t> ids) const;
  Batch full() const;

 private:
  Task task_ = Task::kNode;
  std::string name_;
  graph::Graph graph_;
  graph::GraphSet set_;
  std::vector<conv::EdgeIndex> edges_;
  std::vector<std::int32_t> labels_;
  std::size_t n_classes_ = 0;
  std::size_t n_features_ = 0;
};

}  // namespace cgc::model
