#include "cgc/conv/edges.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cgc/error.hpp"

namespace cgc::conv {

EdgeIndex structural_weights(const graph::Graph& g) {
  EdgeIndex out;
  out.n_nodes = g.n_nodes();
  auto directed = g.directed_edges();
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    directed.emplace_back(static_cast<Index>(i), static_cast<Index>(i));
  }
  std::sort(directed.begin(), directed.end());
  std::vector<double> degree(g.n_nodes(), 1.0);
  for (auto [u, v] : g.edges()) {
    degree[static_cast<std::size_t>(u)] += 1.0;
    degree[static_cast<std::size_t>(v)] += 1.0;
  }
  out.src.reserve(directed.size());
  out.dst.reserve(directed.size());
  out.structural.reserve(directed.size());
  for (auto [u, v] : directed) {
    out.src.push_back(u);
    out.dst.push_back(v);
    out.structural.push_back(1.0 / std::sqrt(degree[static_cast<std::size_t>(u)] *
                                             degree[static_cast<std::size_t>(v)]));
  }
  return out;
}

EdgeIndex merge(std::span<const EdgeIndex* const> parts) {
  EdgeIndex out;
  std::size_t total = 0;
  for (const EdgeIndex* p : parts) total += p->size();
  out.src.reserve(total);
  out.dst.reserve(total);
  out.structural.reserve(total);
  for (const EdgeIndex* p : parts) {
    const auto offset = static_cast<Index>(out.n_nodes);
    for (std::size_t e = 0; e < p->size(); ++e) {
      out.src.push_back(p->src[e] + offset);
      out.dst.push_back(p->dst[e] + offset);
    }
    out.structural.insert(out.structural.end(), p->structural.begin(), p->structural.end());
    out.n_nodes += p->n_nodes;
  }
  return out;
}

Var concept_attention(Var q, Var a, const EdgeIndex& edges, Var* scores_out) {
  const std::size_t c = q.value().cols();
  if (a.value().size() != 2 * c) {
    throw DimensionError("concept_attention: attention vector of length " +
                         std::to_string(a.value().size()) + " for concept width " +
                         std::to_string(c) + " (expected " + std::to_string(2 * c) + ")");
  }
  if (q.value().rows() != edges.n_nodes) {
    throw DimensionError("concept_attention: " + std::to_string(q.value().rows()) +
                         " concept rows for " + std::to_string(edges.n_nodes) + " nodes");
  }
  // Columns: source half and destination half of a.
  Var a_pair = diff::transpose(diff::reshape(a, {2, c}));
  Var per_node = diff::matmul(q, a_pair);
  Var scores = diff::leaky_relu(diff::edge_pair_scores(per_node, edges.src, edges.dst), 0.2);
  if (scores_out != nullptr) *scores_out = scores;
  return diff::segment_softmax(scores, edges.dst, edges.n_nodes);
}

Var combine_edge_weights(Var structural, Var attention, Var gamma) {
  if (structural.value().size() != attention.value().size()) {
    throw DimensionError("combine_edge_weights: " + std::to_string(structural.value().size()) +
                         " structural weights vs " + std::to_string(attention.value().size()) +
                         " attention weights");
  }
  return diff::lerp(structural, attention, gamma);
}

Var normalized_softmax(Var z, double scale) {
  if (!(scale > 0)) throw ParameterError("normalized_softmax: scale must be positive");
  return diff::row_softmax(diff::scale(diff::row_l2_normalize(z), scale));
}

nlohmann::json to_json(const EdgeWeightSet& w) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t e = 0; e < w.src.size(); ++e) {
    out.push_back({{"src", w.src[e]},
                   {"dst", w.dst[e]},
                   {"structural", w.structural[e]},
                   {"attention", w.attention[e]},
                   {"combined", w.combined[e]}});
  }
  return out;
}

}  // namespace cgc::conv
