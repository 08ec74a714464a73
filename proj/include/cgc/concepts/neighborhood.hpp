#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cgc/graph/graph.hpp"

namespace cgc::concepts {

// Induced subgraph of the ball of radius p around `center`.
struct Neighborhood {
  graph::NodeId center = 0;
  int radius = 0;
  // Original ids ordered by (hop distance, id); nodes[0] is the center.
  std::vector<graph::NodeId> nodes;
  std::vector<int> distance;
  // Induced edges as positions into `nodes`, (lo, hi), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  // Position of an original id, or -1.
  int local(graph::NodeId id) const;
};

Neighborhood p_hop_neighborhood(const graph::Graph& g, graph::NodeId center, int p);

}  // namespace cgc::concepts
