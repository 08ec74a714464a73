#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "cgc/diff/tensor.hpp"
#include "cgc/graph/split.hpp"

namespace cgc::model {
struct Model;
class TaskData;
}  // namespace cgc::model

namespace cgc::concepts {

using Bits = std::vector<std::uint8_t>;

inline constexpr double kDefaultThreshold = 0.5;

struct ConceptEncoding {
  std::vector<double> fuzzy;
  Bits binary;
  int concept_id = -1;
};

// Distinct binary encodings with ids in first-appearance order.
class ConceptTable {
 public:
  // Id of `bits`, registering it (and counting one node) if new.
  int add(const Bits& bits);
  // Id of `bits`, or nullopt if never seen.
  std::optional<int> find(const Bits& bits) const;

  std::size_t size() const { return bits_.size(); }
  const Bits& bits(int id) const { return bits_.at(static_cast<std::size_t>(id)); }
  std::size_t count(int id) const { return counts_.at(static_cast<std::size_t>(id)); }
  std::size_t total() const;

 private:
  std::vector<Bits> bits_;
  std::vector<std::size_t> counts_;
  std::map<Bits, int> ids_;
};

struct Binarized {
  std::vector<ConceptEncoding> encodings;
  ConceptTable table;

  std::vector<int> ids() const;
  // Bits as a 0/1 matrix [n x C], the input of node completeness.
  diff::Tensor bit_matrix() const;
};

// bits[k] = q[k] >= threshold for every row of q.
Binarized binarize(const diff::Tensor& q, double threshold = kDefaultThreshold);

// Test-split accuracy (x100) of a decision tree fitted on the train rows of
// `features` against `labels`. Throws ValidationError when either side of the
// split is empty.
double completeness(const diff::Tensor& features, std::span<const std::int32_t> labels,
                    const graph::SplitSpec& split);

double node_completeness(const Binarized& concepts, std::span<const std::int32_t> labels,
                         const graph::SplitSpec& split);

// Per-graph concept counts [n_graphs x table.size()]. Throws ValidationError
// for encodings missing from the table.
diff::Tensor graph_frequency_vectors(std::span<const ConceptEncoding> encodings, std::span<const std::int32_t> membership,
                                     std::size_t n_graphs, const ConceptTable& table);

double graph_completeness(const diff::Tensor& frequencies, std::span<const std::int32_t> graph_labels,
                          const graph::SplitSpec& split);

struct LayerConcepts {
  int layer = 0;  // 1-based
  Binarized concepts;
  double completeness = 0;
};

// Binarizes every layer's encoding and scores it against the task labels
// (node concepts, or per-graph frequency vectors for graph tasks).
std::vector<LayerConcepts> concept_layers(model::Model& model, const model::TaskData& data,
                                          const graph::SplitSpec& split);
std::vector<double> concept_evolution(model::Model& model, const model::TaskData& data,
                                      const graph::SplitSpec& split);

// {layer, concepts: [{id, bits, count}], completeness}
nlohmann::json report_json(const LayerConcepts& layer);

}  // namespace cgc::concepts
