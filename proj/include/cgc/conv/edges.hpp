#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "cgc/diff/ops.hpp"
#include "cgc/graph/graph.hpp"

namespace cgc::conv {

using diff::Index;
using diff::Var;

// Directed edge list of a graph with a self-loop on every node, in ascending
// (src, dst) order, plus the degree-normalised structural weight of each edge:
// 1 / sqrt(d_src * d_dst) with degrees counted in the self-looped graph.
struct EdgeIndex {
  std::size_t n_nodes = 0;
  std::vector<Index> src;
  std::vector<Index> dst;
  std::vector<double> structural;

  std::size_t size() const { return src.size(); }
};

EdgeIndex structural_weights(const graph::Graph& g);

// Disjoint union; node ids of part k are shifted by the sizes of parts before it.
EdgeIndex merge(std::span<const EdgeIndex* const> parts);

// Per-edge weights of one layer, for inspection and export.
struct EdgeWeightSet {
  std::vector<Index> src;
  std::vector<Index> dst;
  std::vector<double> structural;
  std::vector<double> score;
  std::vector<double> attention;
  std::vector<double> combined;
};

// Static single-head attention over concept vectors:
// alpha_ij = softmax over incoming edges of j of LeakyReLU(a^T [q_i || q_j]).
// `a` has length 2C where C = q.cols(). Optionally exposes the raw scores.
Var concept_attention(Var q, Var a, const EdgeIndex& edges, Var* scores_out = nullptr);

// (1 - gamma) * structural + gamma * attention, per edge.
Var combine_edge_weights(Var structural, Var attention, Var gamma);

// Row-L2-normalise, multiply by `scale`, then row softmax.
Var normalized_softmax(Var z, double scale);

nlohmann::json to_json(const EdgeWeightSet& w);

}  // namespace cgc::conv
