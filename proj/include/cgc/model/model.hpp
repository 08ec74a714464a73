#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include <json.hpp>

#include "cgc/conv/layers.hpp"
#include "cgc/error.hpp"
#include "cgc/graph/split.hpp"
#include "cgc/model/config.hpp"
#include "cgc/model/data.hpp"

namespace cgc::model {

using diff::Parameter;
using diff::Tape;
using diff::Var;

// A stack of graph convolutions of one kind followed by a linear head.
//
// Layer widths: input, then `hidden` for every layer but the last, which
// outputs `concept_width`. Concept layers take the raw features zero-padded to
// max(n_features, concept_width) on both channels; baselines take them as is.
struct Model {
  ModelConfig config;
  Task task = Task::kNode;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;

  std::vector<conv::CgcParams> cgc;  // cgc and pure_cgc
  std::vector<conv::GcnParams> gcn;
  std::vector<conv::GatParams> gat;
  Parameter head_weight;
  Parameter head_bias;

  std::size_t n_layers() const { return static_cast<std::size_t>(config.n_layers); }
  std::size_t input_width() const;
  bool is_concept_model() const {
    return config.layer_kind == LayerKind::kCgc || config.layer_kind == LayerKind::kPureCgc;
  }
  // Every parameter the loss depends on, in a stable order with unique names.
  std::vector<Parameter*> parameters();
  // Final gamma/eta per layer (NaN where the layer kind has none).
  std::vector<double> gammas() const;
  std::vector<double> etas() const;
};

// Glorot-uniform weights seeded by config.seed; zero biases.
Model build_model(const ModelConfig& config, Task task, std::size_t n_features, std::size_t n_classes);

struct ForwardResult {
  Var logits;                 // per node (node task) or per graph (graph task)
  Var input_q;                // encoding fed to the first layer
  std::vector<Var> layer_q;   // fuzzy concept encoding after every layer
  Var reg_loss;               // scalar sum of layer penalties
  std::vector<conv::LayerDiagnostics> diagnostics;
};

ForwardResult forward(Model& model, Tape& tape, const Batch& batch, bool record_edges = false);

// Mean of node rows per graph.
Var graph_readout(Var node_repr, std::span<const Index> membership, std::size_t n_graphs);

// Cross-entropy over the masked rows plus every layer penalty.
Var total_loss(Var logits, std::span<const Index> labels, std::span<const std::uint8_t> mask,
               std::span<const Var> reg_losses);

struct HistoryEntry {
  int epoch = 0;
  double task_loss = 0;
  double reg_loss = 0;
  double train_accuracy = 0;
  double test_accuracy = 0;
  std::vector<double> gamma;
  std::vector<double> eta;
};

struct TrainHistory {
  std::vector<HistoryEntry> entries;
  double final_loss = 0;
  nlohmann::json final_parameters;
};

// Raised when the loss stops being finite; carries what was recorded so far.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& what, int epoch, TrainHistory history)
      : Error(what), epoch(epoch), history(std::move(history)) {}
  int epoch;
  TrainHistory history;
};

// Called after every `every`-th epoch with the epoch number (1-based).
struct TrainHook {
  int every = 0;
  std::function<void(int epoch, Model& model)> fn;
};

// Node tasks: full-batch steps on the train mask. Graph tasks: shuffled
// minibatches of config.batch_size graphs (all train graphs when unset).
TrainHistory train(Model& model, const TaskData& data, const graph::SplitSpec& split,
                   const TrainHook& hook = {});

// Class per item by argmax of the logits; ties go to the lowest class.
std::vector<std::int32_t> predict(Model& model, const TaskData& data);
// Fraction of `items` whose prediction matches the label.
double accuracy(std::span<const std::int32_t> predictions, std::span<const std::int32_t> labels,
                std::span<const std::int32_t> items);
// Test-split accuracy in [0, 1]. Throws on an empty test split.
double evaluate(Model& model, const TaskData& data, const graph::SplitSpec& split);

// Per-layer fuzzy concept encodings of every node of every item, in item order.
std::vector<diff::Tensor> layer_concepts(Model& model, const TaskData& data);

nlohmann::json parameters_json(const Model& model);
nlohmann::json checkpoint_json(const Model& model);
Model model_from_checkpoint(const nlohmann::json& j);
void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace cgc::model
