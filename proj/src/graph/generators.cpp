#include "cgc/graph/generators.hpp"

#include <algorithm>
#include <numeric>

#include "cgc/error.hpp"

namespace cgc::graph {
namespace {

constexpr std::size_t kBaBaseSize = 300;
constexpr std::size_t kBaAttach = 5;
constexpr std::size_t kTreeDepth = 8;

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::size_t uniform_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

void set_constant_features(Graph& g, double value = 1.0) {
  g.features = diff::Tensor::matrix(g.n_nodes(), 1, value);
}

// Labels 0/1 assigned to exactly half of `count` items each, shuffled.
std::vector<std::int32_t> balanced_labels(std::size_t count, std::size_t n_classes, Rng& rng) {
  std::vector<std::int32_t> labels(count);
  for (std::size_t i = 0; i < count; ++i) labels[i] = static_cast<std::int32_t>(i % n_classes);
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

MotifTemplate make_house() {
  // 4-cycle body 0-1-2-3 with roof apex 4 over 0 and 1; bridged at middle node 0.
  return {5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 4}}, 0, {2, 2, 3, 3, 1}};
}

MotifTemplate make_grid() {
  MotifTemplate t{9, {}, 0, std::vector<std::int32_t>(9, 1)};
  for (NodeId r = 0; r < 3; ++r) {
    for (NodeId c = 0; c < 3; ++c) {
      const NodeId id = r * 3 + c;
      if (c + 1 < 3) t.edges.emplace_back(id, id + 1);
      if (r + 1 < 3) t.edges.emplace_back(id, id + 3);
    }
  }
  return t;
}

MotifTemplate make_cycle() {
  MotifTemplate t{6, {}, 0, std::vector<std::int32_t>(6, 1)};
  for (NodeId i = 0; i < 6; ++i) t.edges.emplace_back(i, (i + 1) % 6);
  return t;
}

MotifTemplate make_star() {
  MotifTemplate t{9, {}, 0, std::vector<std::int32_t>(9, 1)};
  for (NodeId leaf = 1; leaf < 9; ++leaf) t.edges.emplace_back(0, leaf);
  return t;
}

// Appends `other` as a disjoint component; returns the id offset used.
NodeId append_disjoint(Graph& g, const Graph& other) {
  const NodeId offset = g.add_nodes(other.n_nodes());
  for (auto [u, v] : other.edges()) g.add_edge(u + offset, v + offset);
  return offset;
}

Graph ba_shapes_instance(Rng& rng) {
  Graph g = attach_motifs(generate_ba(kBaBaseSize, kBaAttach, rng), Motif::kHouse, 80, rng, true);
  add_random_edges(g, 70, rng);
  return g;
}

}  // namespace

Motif parse_motif(std::string_view name) {
  if (name == "house" || name == "house5") return Motif::kHouse;
  if (name == "grid" || name == "grid3x3") return Motif::kGrid3x3;
  if (name == "cycle" || name == "cycle6") return Motif::kCycle6;
  if (name == "star") return Motif::kStar;
  throw ParameterError("unknown motif '" + std::string(name) + "'");
}

NodeDatasetKind parse_node_dataset(std::string_view name) {
  if (name == "ba_shapes") return NodeDatasetKind::kBaShapes;
  if (name == "ba_community") return NodeDatasetKind::kBaCommunity;
  if (name == "ba_grid") return NodeDatasetKind::kBaGrid;
  if (name == "tree_cycles") return NodeDatasetKind::kTreeCycles;
  if (name == "tree_grid") return NodeDatasetKind::kTreeGrid;
  throw ParameterError("unknown node dataset '" + std::string(name) + "'");
}

GraphDatasetKind parse_graph_dataset(std::string_view name) {
  if (name == "grid") return GraphDatasetKind::kGrid;
  if (name == "grid_house") return GraphDatasetKind::kGridHouse;
  if (name == "stars") return GraphDatasetKind::kStars;
  if (name == "house_colour") return GraphDatasetKind::kHouseColour;
  throw ParameterError("unknown graph dataset '" + std::string(name) + "'");
}

std::string to_string(NodeDatasetKind kind) {
  switch (kind) {
    case NodeDatasetKind::kBaShapes: return "ba_shapes";
    case NodeDatasetKind::kBaCommunity: return "ba_community";
    case NodeDatasetKind::kBaGrid: return "ba_grid";
    case NodeDatasetKind::kTreeCycles: return "tree_cycles";
    case NodeDatasetKind::kTreeGrid: return "tree_grid";
  }
  return "?";
}

std::string to_string(GraphDatasetKind kind) {
  switch (kind) {
    case GraphDatasetKind::kGrid: return "grid";
    case GraphDatasetKind::kGridHouse: return "grid_house";
    case GraphDatasetKind::kStars: return "stars";
    case GraphDatasetKind::kHouseColour: return "house_colour";
  }
  return "?";
}

const MotifTemplate& motif_template(Motif motif) {
  static const MotifTemplate house = make_house();
  static const MotifTemplate grid = make_grid();
  static const MotifTemplate cycle = make_cycle();
  static const MotifTemplate star = make_star();
  switch (motif) {
    case Motif::kHouse: return house;
    case Motif::kGrid3x3: return grid;
    case Motif::kCycle6: return cycle;
    case Motif::kStar: return star;
  }
  throw ParameterError("unknown motif kind");
}

Graph generate_ba(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1 || m >= n) {
    throw ParameterError("generate_ba: need 1 <= m < n, got n=" + std::to_string(n) +
                         " m=" + std::to_string(m));
  }
  Graph g(n);
  // Every edge endpoint appears once here, so uniform draws are degree-proportional.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * (m * (m - 1) / 2 + m * (n - m)));
  for (NodeId u = 0; u < static_cast<NodeId>(m); ++u) {
    for (NodeId v = u + 1; v < static_cast<NodeId>(m); ++v) {
      g.add_edge(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  for (auto node = static_cast<NodeId>(m); node < static_cast<NodeId>(n); ++node) {
    targets.clear();
    while (targets.size() < m) {
      // A single seed node has no degree yet; fall back to uniform choice.
      const NodeId t = endpoints.empty() ? static_cast<NodeId>(uniform_index(rng, static_cast<std::size_t>(node)))
                                         : endpoints[uniform_index(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      g.add_edge(node, t);
      endpoints.push_back(node);
      endpoints.push_back(t);
    }
  }
  return g;
}

Graph generate_binary_tree(std::size_t depth) {
  const std::size_t n = (std::size_t{1} << (depth + 1)) - 1;
  Graph g(n);
  for (std::size_t i = 1; i < n; ++i) g.add_edge(static_cast<NodeId>((i - 1) / 2), static_cast<NodeId>(i));
  return g;
}

Graph generate_connected_er(std::size_t n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  for (;;) {
    Graph g(n);
    for (NodeId u = 0; u < static_cast<NodeId>(n); ++u)
      for (NodeId v = u + 1; v < static_cast<NodeId>(n); ++v)
        if (coin(rng)) g.add_edge(u, v);
    if (is_connected(g)) return g;
  }
}

Graph attach_motifs(const Graph& base, Motif motif, std::size_t count, Rng& rng, bool role_labels) {
  const MotifTemplate& tpl = motif_template(motif);
  if (base.n_nodes() == 0) throw ParameterError("attach_motifs: empty base graph");
  Graph g = base;
  const std::size_t base_n = base.n_nodes();
  if (g.motif_mask.empty()) g.motif_mask.assign(base_n, 0);
  const bool had_labels = !g.node_labels.empty();
  if (role_labels && !had_labels) g.node_labels.assign(base_n, 0);

  for (std::size_t c = 0; c < count; ++c) {
    const NodeId offset = g.add_nodes(tpl.n_nodes);
    for (auto [u, v] : tpl.edges) g.add_edge(u + offset, v + offset);
    const auto target = static_cast<NodeId>(uniform_index(rng, base_n));
    g.add_edge(tpl.anchor + offset, target);
    g.motif_mask.insert(g.motif_mask.end(), tpl.n_nodes, 1);
    if (role_labels) {
      g.node_labels.insert(g.node_labels.end(), tpl.roles.begin(), tpl.roles.end());
    } else if (had_labels) {
      g.node_labels.insert(g.node_labels.end(), tpl.n_nodes, 0);
    }
  }
  if (base.features.rank() == 2 && base.features.rows() == base_n) {
    // Base rows are kept; motif rows default to ones.
    diff::Tensor features = diff::Tensor::matrix(g.n_nodes(), base.features.cols(), 1.0);
    std::copy(base.features.values().begin(), base.features.values().end(), features.values().begin());
    g.features = std::move(features);
  }
  return g;
}

void add_random_edges(Graph& g, std::size_t count, Rng& rng) {
  const std::size_t n = g.n_nodes();
  const std::size_t max_edges = n * (n - 1) / 2;
  if (g.n_edges() + count > max_edges) throw ParameterError("add_random_edges: graph would exceed complete");
  std::size_t added = 0;
  while (added < count) {
    const auto u = static_cast<NodeId>(uniform_index(rng, n));
    const auto v = static_cast<NodeId>(uniform_index(rng, n));
    if (g.add_edge(u, v)) ++added;
  }
}

Graph build_node_dataset(NodeDatasetKind kind, std::uint64_t seed) {
  Rng rng(seed);
  Graph g;
  switch (kind) {
    case NodeDatasetKind::kBaShapes:
      g = ba_shapes_instance(rng);
      break;
    case NodeDatasetKind::kBaCommunity: {
      Graph first = ba_shapes_instance(rng);
      Graph second = ba_shapes_instance(rng);
      const std::size_t half = first.n_nodes();
      g = Graph(0);
      append_disjoint(g, first);
      append_disjoint(g, second);
      g.node_labels = first.node_labels;
      for (auto l : second.node_labels) g.node_labels.push_back(l + 4);
      g.motif_mask = first.motif_mask;
      g.motif_mask.insert(g.motif_mask.end(), second.motif_mask.begin(), second.motif_mask.end());
      std::size_t added = 0;
      while (added < 70) {
        const auto u = static_cast<NodeId>(uniform_index(rng, half));
        const auto v = static_cast<NodeId>(half + uniform_index(rng, half));
        if (g.add_edge(u, v)) ++added;
      }
      g.features = diff::Tensor::matrix(g.n_nodes(), 1, 0.0);
      for (std::size_t i = half; i < g.n_nodes(); ++i) g.features(i, 0) = 1.0;
      g.validate();
      return g;
    }
    case NodeDatasetKind::kBaGrid:
      g = attach_motifs(generate_ba(kBaBaseSize, kBaAttach, rng), Motif::kGrid3x3, 80, rng, true);
      break;
    case NodeDatasetKind::kTreeCycles:
      g = attach_motifs(generate_binary_tree(kTreeDepth), Motif::kCycle6, 60, rng, true);
      break;
    case NodeDatasetKind::kTreeGrid:
      g = attach_motifs(generate_binary_tree(kTreeDepth), Motif::kGrid3x3, 80, rng, true);
      break;
  }
  set_constant_features(g);
  g.validate();
  return g;
}

GraphSet build_graph_dataset(GraphDatasetKind kind, std::uint64_t seed) {
  Rng rng(seed);
  GraphSet set;
  set.name = to_string(kind);
  switch (kind) {
    case GraphDatasetKind::kGrid: {
      set.graph_labels = balanced_labels(2000, 2, rng);
      for (auto label : set.graph_labels) {
        Graph g = generate_ba(uniform_between(rng, 8, 27), kBaAttach, rng);
        if (label == 1) g = attach_motifs(g, Motif::kGrid3x3, 1, rng, false);
        set_constant_features(g);
        set.graphs.push_back(std::move(g));
      }
      break;
    }
    case GraphDatasetKind::kGridHouse: {
      // Wide base-size spread keeps motif fractions overlapping across classes.
      set.graph_labels = balanced_labels(1000, 2, rng);
      for (auto label : set.graph_labels) {
        Graph g = generate_ba(uniform_between(rng, 60, 165), kBaAttach, rng);
        if (label == 1) {
          g = attach_motifs(g, Motif::kGrid3x3, 1, rng, false);
          g = attach_motifs(g, Motif::kHouse, 1, rng, false);
        } else {
          const bool grid = std::bernoulli_distribution(0.5)(rng);
          g = attach_motifs(g, grid ? Motif::kGrid3x3 : Motif::kHouse, 1, rng, false);
        }
        set_constant_features(g);
        set.graphs.push_back(std::move(g));
      }
      break;
    }
    case GraphDatasetKind::kStars: {
      set.graph_labels = balanced_labels(1500, 3, rng);
      for (auto label : set.graph_labels) {
        const std::size_t stars = label == 2 ? uniform_between(rng, 3, 4) : static_cast<std::size_t>(label) + 1;
        Graph g = attach_motifs(generate_connected_er(40, 0.1, rng), Motif::kStar, stars, rng, false);
        set_constant_features(g);
        set.graphs.push_back(std::move(g));
      }
      break;
    }
    case GraphDatasetKind::kHouseColour: {
      // Colour one-hot order: blue, green, red. Base nodes are red.
      constexpr std::size_t kBlue = 0, kGreen = 1, kRed = 2;
      set.graph_labels = balanced_labels(1000, 2, rng);
      for (auto label : set.graph_labels) {
        Graph base = generate_ba(uniform_between(rng, 30, 44), kBaAttach, rng);
        const std::size_t base_n = base.n_nodes();
        const std::size_t houses = uniform_between(rng, 1, 3);
        Graph g = attach_motifs(base, Motif::kHouse, houses, rng, false);
        g.features = diff::Tensor::matrix(g.n_nodes(), 3, 0.0);
        for (std::size_t i = 0; i < base_n; ++i) g.features(i, kRed) = 1.0;
        const std::size_t signal = uniform_index(rng, houses);
        for (std::size_t h = 0; h < houses; ++h) {
          for (std::size_t j = 0; j < 5; ++j) {
            const std::size_t node = base_n + h * 5 + j;
            std::size_t colour = label == 1 ? kBlue : kGreen;
            if (h != signal) colour = uniform_index(rng, 3);
            g.features(node, colour) = 1.0;
          }
        }
        set.graphs.push_back(std::move(g));
      }
      break;
    }
  }
  set.validate();
  return set;
}

}  // namespace cgc::graph
