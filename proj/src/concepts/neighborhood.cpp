#include "cgc/concepts/neighborhood.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "cgc/error.hpp"

namespace cgc::concepts {

int Neighborhood::local(graph::NodeId id) const {
  auto it = std::find(nodes.begin(), nodes.end(), id);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

Neighborhood p_hop_neighborhood(const graph::Graph& g, graph::NodeId center, int p) {
  if (p < 0) throw ParameterError("p_hop_neighborhood: p must be >= 0, got " + std::to_string(p));
  if (center < 0 || static_cast<std::size_t>(center) >= g.n_nodes()) {
    throw IndexError("p_hop_neighborhood: node " + std::to_string(center) + " out of range [0, " +
                     std::to_string(g.n_nodes()) + ")");
  }
  const auto adj = g.adjacency();
  std::vector<int> dist(g.n_nodes(), -1);
  std::deque<graph::NodeId> queue{center};
  dist[static_cast<std::size_t>(center)] = 0;
  std::vector<std::pair<int, graph::NodeId>> reached{{0, center}};
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    const int du = dist[static_cast<std::size_t>(u)];
    if (du == p) continue;
    for (auto v : adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] >= 0) continue;
      dist[static_cast<std::size_t>(v)] = du + 1;
      reached.emplace_back(du + 1, v);
      queue.push_back(v);
    }
  }
  std::sort(reached.begin(), reached.end());

  Neighborhood out;
  out.center = center;
  out.radius = p;
  std::vector<int> pos(g.n_nodes(), -1);
  for (const auto& [d, v] : reached) {
    pos[static_cast<std::size_t>(v)] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(v);
    out.distance.push_back(d);
  }
  for (const auto& [u, v] : g.edges()) {
    const int a = pos[static_cast<std::size_t>(u)], b = pos[static_cast<std::size_t>(v)];
    if (a < 0 || b < 0) continue;
    out.edges.emplace_back(static_cast<std::size_t>(std::min(a, b)), static_cast<std::size_t>(std::max(a, b)));
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace cgc::concepts
