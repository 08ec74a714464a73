#pragma once

#include <limits>
#include <optional>
#include <random>
#include <string>

#include <json.hpp>

#include "cgc/conv/edges.hpp"

namespace cgc::conv {

using diff::Parameter;
using diff::Tape;

// Targets and strengths of the squared penalties pulling gamma and eta
// towards their targets.
struct RegConfig {
  double gamma_target = 0.8;
  double eta_target = 0.8;
  double lambda_a = 0.1;
  double lambda_b = 0.1;

  void validate() const;
};

// Learnable state of one concept convolution. `weight` is shared by the raw
// and the concept channel, so both enter with width weight.rows(); `att` has
// length 2 * weight.rows(). gamma_raw and eta_raw are squashed into (0, 1).
struct CgcParams {
  Parameter weight;
  Parameter att;
  Parameter bias;
  Parameter gamma_raw;
  Parameter eta_raw;

  std::size_t in_width() const { return weight.value.rows(); }
  std::size_t out_width() const { return weight.value.cols(); }

  // Glorot-uniform weight and attention, zero bias, raw scalars at 0.
  static CgcParams init(std::size_t in_width, std::size_t out_width, std::mt19937_64& rng,
                        const std::string& prefix);
};

// Single-head GAT layer state.
struct GatParams {
  Parameter weight;
  Parameter att;  // length 2 * out_width
  Parameter bias;

  static GatParams init(std::size_t in_width, std::size_t out_width, std::mt19937_64& rng,
                        const std::string& prefix);
};

struct GcnParams {
  Parameter weight;
  Parameter bias;

  static GcnParams init(std::size_t in_width, std::size_t out_width, std::mt19937_64& rng,
                        const std::string& prefix);
};

// Pins gamma and/or eta to an exact value instead of the squashed parameter.
struct MixOverride {
  std::optional<double> gamma;
  std::optional<double> eta;
};

struct LayerDiagnostics {
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  // Filled only when requested.
  std::optional<EdgeWeightSet> edges;
};

struct CgcOutput {
  Var z;         // aggregate before the concept projection
  Var q;         // fuzzy concept encoding of the next layer
  Var reg_loss;  // scalar
  LayerDiagnostics diagnostics;
};

struct ForwardOptions {
  double softmax_scale = 5.0;
  MixOverride mix;
  bool record_edges = false;
};

// Concept graph convolution on the raw channel u and concept channel q:
//   h = (1 - eta) u W + eta q W
//   w_ij = (1 - gamma) structural_ij + gamma alpha_ij(q)
//   z_j = sum_i w_ij h_i + b,  q' = normalized_softmax(z)
CgcOutput cgc_forward(Var u, Var q, CgcParams& params, const EdgeIndex& edges,
                      const RegConfig& reg, const ForwardOptions& options = {});

// Concept-only variant: h = q W; no eta and no eta penalty.
CgcOutput pure_cgc_forward(Var q, CgcParams& params, const EdgeIndex& edges, const RegConfig& reg,
                           const ForwardOptions& options = {});

// z_j = sum_i structural_ij (x_i W) + b, without activation.
Var gcn_forward(Var x, GcnParams& params, const EdgeIndex& edges);

struct GatOutput {
  Var z;
  Var attention;
};

// z_j = sum_i alpha_ij (x_i W) + b with alpha over transformed features.
GatOutput gat_forward(Var x, GatParams& params, const EdgeIndex& edges);

nlohmann::json diagnostics_json(std::size_t layer, const LayerDiagnostics& d);

}  // namespace cgc::conv
