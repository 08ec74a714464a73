#include "cgc/conv/layers.hpp"

#include <cmath>

#include "cgc/error.hpp"

namespace cgc::conv {
namespace {

diff::Tensor glorot(std::size_t fan_in, std::size_t fan_out, std::vector<std::size_t> shape,
                    std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  diff::Tensor t(std::move(shape));
  for (double& v : t.values()) v = dist(rng);
  return t;
}

void check_width(Var x, const Parameter& weight, const char* what) {
  if (x.value().rank() != 2 || x.value().cols() != weight.value.rows()) {
    throw DimensionError(std::string(what) + " of shape " + diff::shape_string(x.value().shape()) +
                         " does not match weight " + diff::shape_string(weight.value.shape()));
  }
}

void check_rows(Var x, const EdgeIndex& edges, const char* what) {
  if (x.value().rows() != edges.n_nodes) {
    throw DimensionError(std::string(what) + " has " + std::to_string(x.value().rows()) +
                         " rows for a graph of " + std::to_string(edges.n_nodes) + " nodes");
  }
}

Var mixing_scalar(Tape& tape, Parameter& raw, std::optional<double> pinned) {
  if (pinned) return tape.constant(diff::Tensor::scalar(*pinned));
  return diff::constrained_scalar(tape.parameter(raw));
}

// Shared tail: attention, edge mixing, aggregation, concept projection.
CgcOutput aggregate(Tape& tape, Var h, Var q, CgcParams& params, const EdgeIndex& edges,
                    Var gamma, const ForwardOptions& options) {
  Var scores;
  Var alpha = concept_attention(q, tape.parameter(params.att), edges, options.record_edges ? &scores : nullptr);
  Var structural = tape.constant(diff::Tensor::vector(edges.structural));
  Var w = combine_edge_weights(structural, alpha, gamma);
  Var z = diff::add_row_bias(diff::propagate(h, w, edges.src, edges.dst, edges.n_nodes),
                             tape.parameter(params.bias));
  CgcOutput out;
  out.z = z;
  out.q = normalized_softmax(z, options.softmax_scale);
  out.diagnostics.gamma = gamma.item();
  if (options.record_edges) {
    EdgeWeightSet set;
    set.src = edges.src;
    set.dst = edges.dst;
    set.structural = edges.structural;
    set.score = scores.value().values();
    set.attention = alpha.value().values();
    set.combined = w.value().values();
    out.diagnostics.edges = std::move(set);
  }
  return out;
}

}  // namespace

void RegConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_unit(gamma_target) || !in_unit(eta_target)) {
    throw ParameterError("regularisation targets must lie in (0, 1)");
  }
  if (lambda_a < 0 || lambda_b < 0) throw ParameterError("regularisation strengths must be >= 0");
}

CgcParams CgcParams::init(std::size_t in_width, std::size_t out_width, std::mt19937_64& rng,
                          const std::string& prefix) {
  CgcParams p;
  p.weight = Parameter(prefix + ".weight", glorot(in_width, out_width, {in_width, out_width}, rng));
  p.att = Parameter(prefix + ".att", glorot(2 * in_width, 1, {2 * in_width}, rng));
  p.bias = Parameter(prefix + ".bias", diff::Tensor({out_width}, 0.0));
  p.gamma_raw = Parameter(prefix + ".gamma_raw", diff::Tensor::scalar(0.0));
  p.eta_raw = Parameter(prefix + ".eta_raw", diff::Tensor::scalar(0.0));
  return p;
}

GatParams GatParams::init(std::size_t in_width, std::size_t out_width, std::mt19937_64& rng,
                          const std::string& prefix) {
  GatParams p;
  p.weight = Parameter(prefix + ".weight", glorot(in_width, out_width, {in_width, out_width}, rng));
  p.att = Parameter(prefix + ".att", glorot(2 * out_width, 1, {2 * out_width}, rng));
  p.bias = Parameter(prefix + ".bias", diff::Tensor({out_width}, 0.0));
  return p;
}

GcnParams GcnParams::init(std::size_t in_width, std::size_t out_width, std::mt19937_64& rng,
                          const std::string& prefix) {
  GcnParams p;
  p.weight = Parameter(prefix + ".weight", glorot(in_width, out_width, {in_width, out_width}, rng));
  p.bias = Parameter(prefix + ".bias", diff::Tensor({out_width}, 0.0));
  return p;
}

CgcOutput cgc_forward(Var u, Var q, CgcParams& params, const EdgeIndex& edges,
                      const RegConfig& reg, const ForwardOptions& options) {
  check_width(u, params.weight, "cgc_forward: raw input");
  check_width(q, params.weight, "cgc_forward: concept input");
  check_rows(u, edges, "cgc_forward: raw input");
  check_rows(q, edges, "cgc_forward: concept input");
  Tape& tape = *u.tape();
  Var weight = tape.parameter(params.weight);
  Var eta = mixing_scalar(tape, params.eta_raw, options.mix.eta);
  Var h = diff::lerp(diff::matmul(u, weight), diff::matmul(q, weight), eta);
  Var gamma = mixing_scalar(tape, params.gamma_raw, options.mix.gamma);
  CgcOutput out = aggregate(tape, h, q, params, edges, gamma, options);
  out.diagnostics.eta = eta.item();
  out.reg_loss = diff::add(diff::l2_target_penalty(gamma, reg.gamma_target, reg.lambda_a),
                           diff::l2_target_penalty(eta, reg.eta_target, reg.lambda_b));
  return out;
}

CgcOutput pure_cgc_forward(Var q, CgcParams& params, const EdgeIndex& edges, const RegConfig& reg,
                           const ForwardOptions& options) {
  check_width(q, params.weight, "pure_cgc_forward: concept input");
  check_rows(q, edges, "pure_cgc_forward: concept input");
  Tape& tape = *q.tape();
  Var h = diff::matmul(q, tape.parameter(params.weight));
  Var gamma = mixing_scalar(tape, params.gamma_raw, options.mix.gamma);
  CgcOutput out = aggregate(tape, h, q, params, edges, gamma, options);
  out.reg_loss = diff::l2_target_penalty(gamma, reg.gamma_target, reg.lambda_a);
  return out;
}

Var gcn_forward(Var x, GcnParams& params, const EdgeIndex& edges) {
  check_width(x, params.weight, "gcn_forward: input");
  check_rows(x, edges, "gcn_forward: input");
  Tape& tape = *x.tape();
  Var h = diff::matmul(x, tape.parameter(params.weight));
  Var structural = tape.constant(diff::Tensor::vector(edges.structural));
  return diff::add_row_bias(diff::propagate(h, structural, edges.src, edges.dst, edges.n_nodes),
                            tape.parameter(params.bias));
}

GatOutput gat_forward(Var x, GatParams& params, const EdgeIndex& edges) {
  check_width(x, params.weight, "gat_forward: input");
  check_rows(x, edges, "gat_forward: input");
  Tape& tape = *x.tape();
  Var h = diff::matmul(x, tape.parameter(params.weight));
  Var alpha = concept_attention(h, tape.parameter(params.att), edges);
  Var z = diff::add_row_bias(diff::propagate(h, alpha, edges.src, edges.dst, edges.n_nodes),
                             tape.parameter(params.bias));
  return {z, alpha};
}

nlohmann::json diagnostics_json(std::size_t layer, const LayerDiagnostics& d) {
  nlohmann::json j;
  j["layer"] = layer;
  j["gamma"] = std::isnan(d.gamma) ? nlohmann::json(nullptr) : nlohmann::json(d.gamma);
  j["eta"] = std::isnan(d.eta) ? nlohmann::json(nullptr) : nlohmann::json(d.eta);
  j["edge_weights"] = d.edges ? to_json(*d.edges) : nlohmann::json::array();
  return j;
}

}  // namespace cgc::conv
