#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cgc/conv/layers.hpp"

namespace cgc::model {

enum class LayerKind { kCgc, kPureCgc, kGcn, kGat };
enum class Task { kNode, kGraph };

LayerKind parse_layer_kind(std::string_view name);
std::string to_string(LayerKind kind);
std::string to_string(Task task);

struct ModelConfig {
  LayerKind layer_kind = LayerKind::kCgc;
  int n_layers = 4;
  int hidden = 10;
  // Width of the final layer's concept encoding.
  int concept_width = 10;
  double lr = 0.001;
  // Minibatch size in graphs; node tasks train full-batch.
  std::optional<int> batch_size;
  int epochs = 7000;
  conv::RegConfig reg;
  std::uint64_t seed = 0;
  double softmax_scale = 5.0;
  std::string optimizer = "adam";
  double momentum = 0.0;
  int history_every = 10;
  double train_fraction = 0.8;

  void validate() const;
};

// Architecture and training defaults per dataset (layers, hidden units,
// concept width, learning rate, batch size, epochs). Unknown names throw.
ModelConfig dataset_defaults(std::string_view dataset);

nlohmann::json to_json(const ModelConfig& c);
ModelConfig config_from_json(const nlohmann::json& j);

// Applies one "key=value" override (same keys as the JSON form). Throws
// ParameterError on an unknown key or malformed value.
void apply_override(ModelConfig& c, std::string_view key, std::string_view value);

}  // namespace cgc::model
