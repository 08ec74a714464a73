#include "cgc/concepts/concepts.hpp"

#include <string>

#include "cgc/concepts/tree.hpp"
#include "cgc/error.hpp"
#include "cgc/model/model.hpp"

namespace cgc::concepts {

int ConceptTable::add(const Bits& bits) {
  auto [it, inserted] = ids_.try_emplace(bits, static_cast<int>(bits_.size()));
  if (inserted) {
    bits_.push_back(bits);
    counts_.push_back(0);
  }
  ++counts_[static_cast<std::size_t>(it->second)];
  return it->second;
}

std::optional<int> ConceptTable::find(const Bits& bits) const {
  auto it = ids_.find(bits);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t ConceptTable::total() const {
  std::size_t n = 0;
  for (auto c : counts_) n += c;
  return n;
}

std::vector<int> Binarized::ids() const {
  std::vector<int> out;
  out.reserve(encodings.size());
  for (const auto& e : encodings) out.push_back(e.concept_id);
  return out;
}

diff::Tensor Binarized::bit_matrix() const {
  const std::size_t width = encodings.empty() ? 0 : encodings.front().binary.size();
  diff::Tensor out = diff::Tensor::matrix(encodings.size(), width);
  for (std::size_t i = 0; i < encodings.size(); ++i) {
    for (std::size_t k = 0; k < width; ++k) out(i, k) = encodings[i].binary[k];
  }
  return out;
}

Binarized binarize(const diff::Tensor& q, double threshold) {
  if (q.rank() != 2) throw DimensionError("binarize: expected [n x C], got " + diff::shape_string(q.shape()));
  Binarized out;
  out.encodings.reserve(q.rows());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    ConceptEncoding e;
    const auto row = q.row(i);
    e.fuzzy.assign(row.begin(), row.end());
    e.binary.reserve(row.size());
    for (double v : row) e.binary.push_back(v >= threshold ? 1 : 0);
    e.concept_id = out.table.add(e.binary);
    out.encodings.push_back(std::move(e));
  }
  return out;
}

double completeness(const diff::Tensor& features, std::span<const std::int32_t> labels,
                    const graph::SplitSpec& split) {
  if (split.train_idx.empty() || split.test_idx.empty()) {
    throw ValidationError("completeness: split needs both train and test items");
  }
  if (features.rank() != 2 || features.rows() != labels.size()) {
    throw DimensionError("completeness: features " + diff::shape_string(features.shape()) + " vs " +
                         std::to_string(labels.size()) + " labels");
  }
  const std::size_t width = features.cols();
  auto take = [&](const std::vector<std::int32_t>& idx, diff::Tensor& x, std::vector<std::int32_t>& y) {
    x = diff::Tensor::matrix(idx.size(), width);
    y.clear();
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const auto i = static_cast<std::size_t>(idx[r]);
      if (i >= labels.size()) throw IndexError("completeness: split index " + std::to_string(i) + " out of range");
      for (std::size_t k = 0; k < width; ++k) x(r, k) = features(i, k);
      y.push_back(labels[i]);
    }
  };
  diff::Tensor x_train, x_test;
  std::vector<std::int32_t> y_train, y_test;
  take(split.train_idx, x_train, y_train);
  take(split.test_idx, x_test, y_test);

  const auto tree = DecisionTree::fit(x_train, y_train);
  const auto pred = tree.predict(x_test);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == y_test[i];
  return 100.0 * static_cast<double>(hits) / static_cast<double>(pred.size());
}

double node_completeness(const Binarized& concepts, std::span<const std::int32_t> labels,
                         const graph::SplitSpec& split) {
  return completeness(concepts.bit_matrix(), labels, split);
}

diff::Tensor graph_frequency_vectors(std::span<const ConceptEncoding> encodings, std::span<const std::int32_t> membership,
                                     std::size_t n_graphs, const ConceptTable& table) {
  if (membership.size() != encodings.size()) {
    throw DimensionError("graph_frequency_vectors: " + std::to_string(encodings.size()) + " encodings but " +
                         std::to_string(membership.size()) + " membership entries");
  }
  diff::Tensor out = diff::Tensor::matrix(n_graphs, table.size());
  for (std::size_t i = 0; i < encodings.size(); ++i) {
    const auto id = table.find(encodings[i].binary);
    if (!id) throw ValidationError("graph_frequency_vectors: node " + std::to_string(i) + " has an unknown encoding");
    const auto g = membership[i];
    if (g < 0 || static_cast<std::size_t>(g) >= n_graphs) {
      throw IndexError("graph_frequency_vectors: graph id " + std::to_string(g) + " out of range");
    }
    out(static_cast<std::size_t>(g), static_cast<std::size_t>(*id)) += 1.0;
  }
  return out;
}

double graph_completeness(const diff::Tensor& frequencies, std::span<const std::int32_t> graph_labels,
                          const graph::SplitSpec& split) {
  return completeness(frequencies, graph_labels, split);
}

std::vector<LayerConcepts> concept_layers(model::Model& model, const model::TaskData& data,
                                          const graph::SplitSpec& split) {
  const auto qs = model::layer_concepts(model, data);
  std::vector<std::int32_t> membership;
  if (data.task() == model::Task::kGraph) {
    const auto& set = data.graph_set();
    for (std::size_t g = 0; g < set.size(); ++g) {
      membership.insert(membership.end(), set.graphs[g].n_nodes(), static_cast<std::int32_t>(g));
    }
  }
  std::vector<LayerConcepts> out;
  out.reserve(qs.size());
  for (std::size_t l = 0; l < qs.size(); ++l) {
    LayerConcepts lc;
    lc.layer = static_cast<int>(l) + 1;
    lc.concepts = binarize(qs[l]);
    if (data.task() == model::Task::kNode) {
      lc.completeness = node_completeness(lc.concepts, data.labels(), split);
    } else {
      const auto freq = graph_frequency_vectors(lc.concepts.encodings, membership, data.n_items(), lc.concepts.table);
      lc.completeness = graph_completeness(freq, data.labels(), split);
    }
    out.push_back(std::move(lc));
  }
  return out;
}

std::vector<double> concept_evolution(model::Model& model, const model::TaskData& data,
                                      const graph::SplitSpec& split) {
  std::vector<double> out;
  for (const auto& lc : concept_layers(model, data, split)) out.push_back(lc.completeness);
  return out;
}

nlohmann::json report_json(const LayerConcepts& layer) {
  nlohmann::json concepts = nlohmann::json::array();
  const auto& table = layer.concepts.table;
  for (std::size_t id = 0; id < table.size(); ++id) {
    std::string bits;
    for (auto b : table.bits(static_cast<int>(id))) bits.push_back(b ? '1' : '0');
    concepts.push_back({{"id", id}, {"bits", bits}, {"count", table.count(static_cast<int>(id))}});
  }
  return {{"layer", layer.layer}, {"concepts", concepts}, {"completeness", layer.completeness}};
}

}  // namespace cgc::concepts
