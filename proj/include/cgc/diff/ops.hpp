#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cgc/diff/tape.hpp"

// Differentiable operations. Every op records onto the tape of its first
// input. Index spans (edge endpoints, labels, masks, memberships) are captured
// by reference: they must stay alive until backward() has run.

namespace cgc::diff {

using Index = std::int32_t;

Var matmul(Var a, Var b);
Var transpose(Var a);
Var reshape(Var a, std::vector<std::size_t> shape);

Var add(Var a, Var b);
Var scale(Var a, double factor);
// (1 - t) * a + t * b with scalar t; a and b share a shape.
Var lerp(Var a, Var b, Var t);
// x[n x d] + b[d] on every row.
Var add_row_bias(Var x, Var b);
Var sum(Var a);

Var relu(Var x);
// max(x, slope * x); at exactly 0 the slope branch supplies the derivative.
Var leaky_relu(Var x, double slope = 0.2);
Var sigmoid(Var x);

// Softmax along each row with max subtraction.
Var row_softmax(Var x);
// Each row divided by max(||row||_2, floor).
Var row_l2_normalize(Var x, double floor = 1e-12);

// out[e] = x[index[e]]
Var gather_rows(Var x, std::span<const Index> index);
// out[e] = w[e] * x[e]
Var scale_rows(Var x, Var w);
// out[dst[e]] += m[e]; rows without incoming messages stay zero.
Var scatter_sum(Var messages, std::span<const Index> dst, std::size_t n_nodes);
// Fused scatter_sum(scale_rows(gather_rows(h, src), w), dst, n_nodes).
Var propagate(Var h, Var w, std::span<const Index> src, std::span<const Index> dst,
              std::size_t n_nodes);
// scores[n x 2] -> out[e] = scores[src[e], 0] + scores[dst[e], 1]
Var edge_pair_scores(Var scores, std::span<const Index> src, std::span<const Index> dst);
// Softmax of edge scores over the edges sharing a destination.
Var segment_softmax(Var scores, std::span<const Index> dst, std::size_t n_nodes);
// Mean of the rows belonging to each segment: out[g] = mean{x[i] : member[i] == g}.
Var segment_mean(Var x, std::span<const Index> membership, std::size_t n_segments);

// Mean negative log-likelihood over the selected rows (all rows when mask is
// empty).
Var cross_entropy(Var logits, std::span<const Index> labels, std::span<const std::uint8_t> mask = {});

// Logistic squashing of a raw scalar into (0, 1). The upper end is clamped to
// the largest double below 1 so saturated values stay strictly inside.
Var constrained_scalar(Var raw);
double logistic(double x);
// weight * (v - target)^2
Var l2_target_penalty(Var v, double target, double weight);

}  // namespace cgc::diff
