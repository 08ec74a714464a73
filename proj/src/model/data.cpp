#include "cgc/model/data.hpp"

#include <algorithm>
#include <numeric>

#include "cgc/error.hpp"

namespace cgc::model {

TaskData TaskData::node_task(std::string name, graph::Graph g) {
  if (g.node_labels.size() != g.n_nodes()) throw ValidationError(name + ": node task without node labels");
  g.validate();
  TaskData d;
  d.task_ = Task::kNode;
  d.name_ = std::move(name);
  d.labels_ = g.node_labels;
  d.n_classes_ = static_cast<std::size_t>(*std::max_element(d.labels_.begin(), d.labels_.end()) + 1);
  d.n_features_ = g.features.cols();
  d.edges_.push_back(conv::structural_weights(g));
  d.graph_ = std::move(g);
  return d;
}

TaskData TaskData::graph_task(graph::GraphSet set) {
  set.validate();
  TaskData d;
  d.task_ = Task::kGraph;
  d.name_ = set.name;
  d.labels_ = set.graph_labels;
  d.n_classes_ = set.n_classes();
  d.n_features_ = set.n_features();
  d.edges_.reserve(set.size());
  for (const auto& g : set.graphs) d.edges_.push_back(conv::structural_weights(g));
  d.set_ = std::move(set);
  return d;
}

const graph::Graph& TaskData::graph() const {
  if (task_ != Task::kNode) throw Error(name_ + ": not a node task");
  return graph_;
}

const graph::GraphSet& TaskData::graph_set() const {
  if (task_ != Task::kGraph) throw Error(name_ + ": not a graph task");
  return set_;
}

Batch TaskData::batch(std::span<const std::int32_t> ids) const {
  if (task_ == Task::kNode) return full();
  Batch b;
  std::vector<const conv::EdgeIndex*> parts;
  parts.reserve(ids.size());
  std::size_t total_nodes = 0;
  for (auto id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= set_.size()) {
      throw IndexError(name_ + ": graph id " + std::to_string(id) + " out of range");
    }
    parts.push_back(&edges_[static_cast<std::size_t>(id)]);
    total_nodes += set_.graphs[static_cast<std::size_t>(id)].n_nodes();
  }
  b.edges = conv::merge(parts);
  b.features = diff::Tensor::matrix(total_nodes, n_features_);
  b.membership.reserve(total_nodes);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto& g = set_.graphs[static_cast<std::size_t>(ids[k])];
    std::copy(g.features.values().begin(), g.features.values().end(),
              b.features.values().begin() + static_cast<std::ptrdiff_t>(offset * n_features_));
    b.membership.insert(b.membership.end(), g.n_nodes(), static_cast<Index>(k));
    b.labels.push_back(labels_[static_cast<std::size_t>(ids[k])]);
    offset += g.n_nodes();
  }
  b.n_graphs = ids.size();
  return b;
}

Batch TaskData::full() const {
  if (task_ == Task::kNode) {
    Batch b;
    b.edges = edges_.front();
    b.features = graph_.features;
    b.labels.assign(labels_.begin(), labels_.end());
    return b;
  }
  std::vector<std::int32_t> ids(set_.size());
  std::iota(ids.begin(), ids.end(), 0);
  return batch(ids);
}

}  // namespace cgc::model
