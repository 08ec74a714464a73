#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "cgc/graph/graph.hpp"

namespace cgc::graph {

using Rng = std::mt19937_64;

enum class Motif { kHouse, kGrid3x3, kCycle6, kStar };

enum class NodeDatasetKind { kBaShapes, kBaCommunity, kBaGrid, kTreeCycles, kTreeGrid };
enum class GraphDatasetKind { kGrid, kGridHouse, kStars, kHouseColour };

Motif parse_motif(std::string_view name);
NodeDatasetKind parse_node_dataset(std::string_view name);
GraphDatasetKind parse_graph_dataset(std::string_view name);
std::string to_string(NodeDatasetKind kind);
std::string to_string(GraphDatasetKind kind);

// Motif template: node count and internal edges in local ids.
struct MotifTemplate {
  std::size_t n_nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  // Local node joined to the base graph by the bridge edge.
  NodeId anchor;
  // Role label per local node (1-based; base nodes are role 0).
  std::vector<std::int32_t> roles;
};
const MotifTemplate& motif_template(Motif motif);

// Preferential attachment: an m-node seed clique, then every new node links to
// m distinct existing nodes drawn proportionally to degree.
Graph generate_ba(std::size_t n, std::size_t m, Rng& rng);

// Perfect binary tree with levels 0..depth (2^(depth+1) - 1 nodes).
Graph generate_binary_tree(std::size_t depth);

// G(n, p) resampled until connected.
Graph generate_connected_er(std::size_t n, double p, Rng& rng);

// Appends `count` disjoint motif copies, each bridged to a uniformly chosen
// node of the original base. With role_labels, base nodes get label 0 and
// motif nodes their template role (house: 1 top, 2 middle, 3 bottom; others 1).
// Features are not touched.
Graph attach_motifs(const Graph& base, Motif motif, std::size_t count, Rng& rng, bool role_labels);

// Adds `count` uniformly random new edges between distinct unconnected nodes.
void add_random_edges(Graph& g, std::size_t count, Rng& rng);

Graph build_node_dataset(NodeDatasetKind kind, std::uint64_t seed);
GraphSet build_graph_dataset(GraphDatasetKind kind, std::uint64_t seed);

}  // namespace cgc::graph
