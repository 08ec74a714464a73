#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cgc/model/model.hpp"

namespace cgc::harness {

inline constexpr const char* kConceptColour = "orange";
inline constexpr const char* kFocalColour = "green";
inline constexpr const char* kContextColour = "blue";

struct ConceptViz {
  std::string dot;
  nlohmann::json json;
};

// For up to `max_instances` members of concept `concept_id` at `layer`
// (1-based), in node order: the layer-hop neighbourhood, each node tagged
// with its previous-layer concept id, and the incoming edge weights of the
// concept node (attention for CGC/GAT, structural weights for GCN).
// Throws ValidationError listing the available ids when the concept is absent.
ConceptViz concept_viz(model::Model& model, const model::TaskData& data, int layer, int concept_id,
                       std::size_t max_instances = 5);

// Writes <stem>.dot and <stem>.json.
void export_concept_viz(model::Model& model, const model::TaskData& data, int layer, int concept_id,
                        const std::filesystem::path& stem, std::size_t max_instances = 5);

}  // namespace cgc::harness
