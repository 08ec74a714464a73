#include "cgc/graph/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "cgc/error.hpp"

namespace cgc::graph {

Graph::Graph(std::size_t n_nodes) : n_nodes_(n_nodes) {}

std::uint64_t Graph::key(NodeId u, NodeId v) {
  const auto lo = static_cast<std::uint32_t>(std::min(u, v));
  const auto hi = static_cast<std::uint32_t>(std::max(u, v));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

NodeId Graph::add_nodes(std::size_t count) {
  const auto first = static_cast<NodeId>(n_nodes_);
  n_nodes_ += count;
  return first;
}

bool Graph::add_edge(NodeId u, NodeId v) {
  if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n_nodes_ ||
      static_cast<std::size_t>(v) >= n_nodes_) {
    throw IndexError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                     ") outside a graph of " + std::to_string(n_nodes_) + " nodes");
  }
  if (u == v) return false;
  if (!edge_keys_.insert(key(u, v)).second) return false;
  edges_.emplace_back(std::min(u, v), std::max(u, v));
  return true;
}

bool Graph::has_edge(NodeId u, NodeId v) const { return edge_keys_.count(key(u, v)) != 0; }

std::vector<std::pair<NodeId, NodeId>> Graph::directed_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edges_.size() * 2);
  for (auto [u, v] : edges_) {
    out.emplace_back(u, v);
    out.emplace_back(v, u);
  }
  return out;
}

std::vector<std::vector<NodeId>> Graph::adjacency() const {
  std::vector<std::vector<NodeId>> adj(n_nodes_);
  for (auto [u, v] : edges_) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(n_nodes_, 0);
  for (auto [u, v] : edges_) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  return deg;
}

void Graph::validate() const {
  std::set<std::pair<NodeId, NodeId>> seen;
  for (auto [u, v] : edges_) {
    if (u < 0 || static_cast<std::size_t>(v) >= n_nodes_ || u >= v) {
      throw ValidationError("malformed edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    if (!seen.emplace(u, v).second) {
      throw ValidationError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
  }
  if (features.rows() != n_nodes_ || features.rank() != 2) {
    throw ValidationError("feature matrix " + diff::shape_string(features.shape()) + " for " +
                          std::to_string(n_nodes_) + " nodes");
  }
  if (!node_labels.empty() && node_labels.size() != n_nodes_) {
    throw ValidationError("node label count differs from node count");
  }
  if (!motif_mask.empty() && motif_mask.size() != n_nodes_) {
    throw ValidationError("motif mask length differs from node count");
  }
}

std::size_t connected_components(const Graph& g) {
  const auto adj = g.adjacency();
  std::vector<bool> seen(g.n_nodes(), false);
  std::size_t components = 0;
  for (std::size_t s = 0; s < g.n_nodes(); ++s) {
    if (seen[s]) continue;
    ++components;
    std::queue<std::size_t> frontier;
    frontier.push(s);
    seen[s] = true;
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (NodeId v : adj[u]) {
        const auto vi = static_cast<std::size_t>(v);
        if (!seen[vi]) {
          seen[vi] = true;
          frontier.push(vi);
        }
      }
    }
  }
  return components;
}

bool is_connected(const Graph& g) { return g.n_nodes() == 0 || connected_components(g) == 1; }

std::size_t GraphSet::n_features() const { return graphs.empty() ? 0 : graphs.front().features.cols(); }

std::size_t GraphSet::n_classes() const {
  std::int32_t mx = -1;
  for (auto l : graph_labels) mx = std::max(mx, l);
  return static_cast<std::size_t>(mx + 1);
}

double GraphSet::mean_graph_size() const {
  if (graphs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& g : graphs) total += static_cast<double>(g.n_nodes());
  return total / static_cast<double>(graphs.size());
}

void GraphSet::validate() const {
  if (graph_labels.size() != graphs.size()) {
    throw ValidationError(name + ": " + std::to_string(graph_labels.size()) + " labels for " +
                          std::to_string(graphs.size()) + " graphs");
  }
  std::vector<bool> used(n_classes(), false);
  for (auto l : graph_labels) {
    if (l < 0) throw ValidationError(name + ": negative graph label");
    used[static_cast<std::size_t>(l)] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw ValidationError(name + ": graph class ids are not contiguous from 0");
  }
  const std::size_t f = n_features();
  for (const auto& g : graphs) {
    g.validate();
    if (g.features.cols() != f) throw ValidationError(name + ": feature widths differ between graphs");
  }
}

}  // namespace cgc::graph
