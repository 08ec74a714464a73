#include "cgc/model/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "cgc/diff/ops.hpp"
#include "cgc/diff/optim.hpp"

namespace cgc::model {
namespace {

constexpr std::size_t kEvalChunk = 128;
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

std::vector<Parameter*> all_parameters(Model& m) {
  std::vector<Parameter*> out;
  for (auto& l : m.cgc) {
    out.insert(out.end(), {&l.weight, &l.att, &l.bias, &l.gamma_raw, &l.eta_raw});
  }
  for (auto& l : m.gcn) out.insert(out.end(), {&l.weight, &l.bias});
  for (auto& l : m.gat) out.insert(out.end(), {&l.weight, &l.att, &l.bias});
  out.push_back(&m.head_weight);
  out.push_back(&m.head_bias);
  return out;
}

std::vector<std::size_t> layer_widths(const Model& m) {
  std::vector<std::size_t> widths{m.input_width()};
  for (int l = 0; l < m.config.n_layers; ++l) {
    const bool last = l + 1 == m.config.n_layers;
    widths.push_back(static_cast<std::size_t>(last ? m.config.concept_width : m.config.hidden));
  }
  return widths;
}

diff::Tensor padded_features(const diff::Tensor& x, std::size_t width) {
  if (x.cols() == width) return x;
  diff::Tensor out = diff::Tensor::matrix(x.rows(), width);
  for (std::size_t i = 0; i < x.rows(); ++i)
    std::copy(x.row(i).begin(), x.row(i).end(), out.row(i).begin());
  return out;
}

std::int32_t argmax_row(std::span<const double> row) {
  return static_cast<std::int32_t>(std::distance(row.begin(), std::max_element(row.begin(), row.end())));
}

void append_predictions(const diff::Tensor& logits, std::vector<std::int32_t>& out) {
  for (std::size_t i = 0; i < logits.rows(); ++i) out.push_back(argmax_row(logits.row(i)));
}

// Calls fn(batch, first_item) over the data in evaluation-sized chunks.
template <typename Fn>
void for_each_chunk(const TaskData& data, Fn&& fn) {
  if (data.task() == Task::kNode) {
    fn(data.full());
    return;
  }
  std::vector<std::int32_t> ids;
  for (std::size_t start = 0; start < data.n_items(); start += kEvalChunk) {
    const std::size_t end = std::min(data.n_items(), start + kEvalChunk);
    ids.resize(end - start);
    std::iota(ids.begin(), ids.end(), static_cast<std::int32_t>(start));
    fn(data.batch(ids));
  }
}

}  // namespace

std::size_t Model::input_width() const {
  if (!is_concept_model()) return n_features;
  return std::max(n_features, static_cast<std::size_t>(config.concept_width));
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out;
  for (Parameter* p : all_parameters(*this)) {
    const bool unused_eta = config.layer_kind == LayerKind::kPureCgc && p->name.ends_with(".eta_raw");
    if (!unused_eta) out.push_back(p);
  }
  return out;
}

std::vector<double> Model::gammas() const {
  std::vector<double> out;
  for (const auto& l : cgc) out.push_back(diff::logistic(l.gamma_raw.value.item()));
  if (out.empty()) out.assign(n_layers(), std::nan(""));
  return out;
}

std::vector<double> Model::etas() const {
  std::vector<double> out;
  if (config.layer_kind == LayerKind::kCgc) {
    for (const auto& l : cgc) out.push_back(diff::logistic(l.eta_raw.value.item()));
  } else {
    out.assign(n_layers(), std::nan(""));
  }
  return out;
}

Model build_model(const ModelConfig& config, Task task, std::size_t n_features, std::size_t n_classes) {
  config.validate();
  if (n_features == 0) throw ParameterError("build_model: zero input features");
  if (n_classes < 2) throw ParameterError("build_model: need at least two classes");
  Model m;
  m.config = config;
  m.task = task;
  m.n_features = n_features;
  m.n_classes = n_classes;
  std::mt19937_64 rng(config.seed);
  const auto widths = layer_widths(m);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l);
    switch (config.layer_kind) {
      case LayerKind::kCgc:
      case LayerKind::kPureCgc:
        m.cgc.push_back(conv::CgcParams::init(widths[l], widths[l + 1], rng, prefix));
        break;
      case LayerKind::kGcn:
        m.gcn.push_back(conv::GcnParams::init(widths[l], widths[l + 1], rng, prefix));
        break;
      case LayerKind::kGat:
        m.gat.push_back(conv::GatParams::init(widths[l], widths[l + 1], rng, prefix));
        break;
    }
  }
  const std::size_t c = widths.back();
  const double limit = std::sqrt(6.0 / static_cast<double>(c + n_classes));
  std::uniform_real_distribution<double> dist(-limit, limit);
  diff::Tensor head = diff::Tensor::matrix(c, n_classes);
  for (double& v : head.values()) v = dist(rng);
  m.head_weight = Parameter("head.weight", std::move(head));
  m.head_bias = Parameter("head.bias", diff::Tensor({n_classes}, 0.0));
  return m;
}

ForwardResult forward(Model& model, Tape& tape, const Batch& batch, bool record_edges) {
  if (batch.features.cols() != model.n_features) {
    throw DimensionError("forward: batch has " + std::to_string(batch.features.cols()) +
                         " features, model expects " + std::to_string(model.n_features));
  }
  const ModelConfig& cfg = model.config;
  ForwardResult out;
  std::vector<Var> reg_terms;
  Var head_in;
  conv::ForwardOptions options;
  options.softmax_scale = cfg.softmax_scale;
  options.record_edges = record_edges;

  if (model.is_concept_model()) {
    Var u = tape.constant(padded_features(batch.features, model.input_width()));
    Var q = conv::normalized_softmax(u, cfg.softmax_scale);
    out.input_q = q;
    for (auto& layer : model.cgc) {
      conv::CgcOutput o = cfg.layer_kind == LayerKind::kCgc
                              ? conv::cgc_forward(u, q, layer, batch.edges, cfg.reg, options)
                              : conv::pure_cgc_forward(q, layer, batch.edges, cfg.reg, options);
      u = o.z;
      q = o.q;
      out.layer_q.push_back(o.q);
      reg_terms.push_back(o.reg_loss);
      out.diagnostics.push_back(std::move(o.diagnostics));
    }
    head_in = cfg.layer_kind == LayerKind::kCgc ? u : q;
  } else {
    Var h = tape.constant(batch.features);
    out.input_q = conv::normalized_softmax(h, cfg.softmax_scale);
    const std::size_t n = model.n_layers();
    for (std::size_t l = 0; l < n; ++l) {
      Var z;
      conv::LayerDiagnostics diag;
      if (cfg.layer_kind == LayerKind::kGcn) {
        z = conv::gcn_forward(h, model.gcn[l], batch.edges);
      } else {
        conv::GatOutput o = conv::gat_forward(h, model.gat[l], batch.edges);
        z = o.z;
        if (record_edges) {
          conv::EdgeWeightSet set;
          set.src = batch.edges.src;
          set.dst = batch.edges.dst;
          set.structural = batch.edges.structural;
          set.attention = o.attention.value().values();
          set.combined = set.attention;
          diag.edges = std::move(set);
        }
      }
      out.layer_q.push_back(conv::normalized_softmax(z, cfg.softmax_scale));
      out.diagnostics.push_back(std::move(diag));
      h = l + 1 < n ? diff::relu(z) : z;
    }
    head_in = out.layer_q.back();
  }

  if (model.task == Task::kGraph) head_in = graph_readout(head_in, batch.membership, batch.n_graphs);
  out.logits = diff::add_row_bias(diff::matmul(head_in, tape.parameter(model.head_weight)),
                                  tape.parameter(model.head_bias));
  Var reg = tape.constant(diff::Tensor::scalar(0.0));
  for (Var r : reg_terms) reg = diff::add(reg, r);
  out.reg_loss = reg;
  return out;
}

Var graph_readout(Var node_repr, std::span<const Index> membership, std::size_t n_graphs) {
  return diff::segment_mean(node_repr, membership, n_graphs);
}

Var total_loss(Var logits, std::span<const Index> labels, std::span<const std::uint8_t> mask,
               std::span<const Var> reg_losses) {
  Var loss = diff::cross_entropy(logits, labels, mask);
  for (Var r : reg_losses) loss = diff::add(loss, r);
  return loss;
}

TrainHistory train(Model& model, const TaskData& data, const graph::SplitSpec& split, const TrainHook& hook) {
  const ModelConfig& cfg = model.config;
  if (data.task() != model.task) throw ParameterError("train: model and data task differ");
  if (split.train_idx.empty()) throw ValidationError("train: empty train split");
  TrainHistory history;
  auto params = model.parameters();
  auto optimizer = diff::make_optimizer(cfg.optimizer, cfg.lr, cfg.momentum);
  const auto& labels = data.labels();

  auto check_finite = [&](double loss, int epoch) {
    if (!std::isfinite(loss)) {
      history.final_parameters = parameters_json(model);
      throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) +
                                 " (loss " + std::to_string(loss) + ")",
                             epoch, history);
    }
  };
  auto run_hook = [&](int epoch) {
    if (hook.fn && hook.every > 0 && epoch % hook.every == 0) hook.fn(epoch, model);
  };

  if (data.task() == Task::kNode) {
    const Batch batch = data.full();
    const auto train_mask = split.train_mask(data.n_items());
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
      Tape tape;
      ForwardResult fr = forward(model, tape, batch);
      Var task_loss = diff::cross_entropy(fr.logits, batch.labels, train_mask);
      Var loss = diff::add(task_loss, fr.reg_loss);
      check_finite(loss.item(), epoch);
      history.final_loss = loss.item();
      if (epoch % cfg.history_every == 0) {
        std::vector<std::int32_t> pred;
        append_predictions(fr.logits.value(), pred);
        history.entries.push_back({epoch, task_loss.item(), fr.reg_loss.item(),
                                   accuracy(pred, labels, split.train_idx),
                                   split.test_idx.empty() ? 0.0 : accuracy(pred, labels, split.test_idx),
                                   model.gammas(), model.etas()});
      }
      tape.backward(loss);
      optimizer->step(params);
      run_hook(epoch);
    }
  } else {
    std::mt19937_64 rng(cfg.seed ^ kShuffleStream);
    std::vector<std::int32_t> order = split.train_idx;
    const std::size_t bs = cfg.batch_size ? static_cast<std::size_t>(*cfg.batch_size) : order.size();
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      double task_sum = 0.0, reg_sum = 0.0;
      std::size_t steps = 0;
      for (std::size_t start = 0; start < order.size(); start += bs) {
        const std::size_t end = std::min(order.size(), start + bs);
        const Batch batch = data.batch(std::span(order).subspan(start, end - start));
        Tape tape;
        ForwardResult fr = forward(model, tape, batch);
        Var task_loss = diff::cross_entropy(fr.logits, batch.labels);
        Var loss = diff::add(task_loss, fr.reg_loss);
        check_finite(loss.item(), epoch);
        task_sum += task_loss.item();
        reg_sum += fr.reg_loss.item();
        ++steps;
        tape.backward(loss);
        optimizer->step(params);
      }
      history.final_loss = (task_sum + reg_sum) / static_cast<double>(steps);
      if (epoch % cfg.history_every == 0) {
        const auto pred = predict(model, data);
        history.entries.push_back({epoch, task_sum / static_cast<double>(steps), reg_sum / static_cast<double>(steps),
                                   accuracy(pred, labels, split.train_idx),
                                   split.test_idx.empty() ? 0.0 : accuracy(pred, labels, split.test_idx),
                                   model.gammas(), model.etas()});
      }
      run_hook(epoch);
    }
  }
  history.final_parameters = parameters_json(model);
  return history;
}

std::vector<std::int32_t> predict(Model& model, const TaskData& data) {
  std::vector<std::int32_t> out;
  out.reserve(data.n_items());
  for_each_chunk(data, [&](const Batch& batch) {
    Tape tape;
    append_predictions(forward(model, tape, batch).logits.value(), out);
  });
  return out;
}

double accuracy(std::span<const std::int32_t> predictions, std::span<const std::int32_t> labels,
                std::span<const std::int32_t> items) {
  if (items.empty()) throw ValidationError("accuracy: empty item set");
  std::size_t hits = 0;
  for (auto i : items) {
    const auto k = static_cast<std::size_t>(i);
    if (predictions[k] == labels[k]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

double evaluate(Model& model, const TaskData& data, const graph::SplitSpec& split) {
  if (split.test_idx.empty()) throw ValidationError("evaluate: empty test split");
  return accuracy(predict(model, data), data.labels(), split.test_idx);
}

std::vector<diff::Tensor> layer_concepts(Model& model, const TaskData& data) {
  std::vector<diff::Tensor> out;
  for_each_chunk(data, [&](const Batch& batch) {
    Tape tape;
    ForwardResult fr = forward(model, tape, batch);
    if (out.empty()) {
      for (Var q : fr.layer_q) out.push_back(q.value());
      return;
    }
    for (std::size_t l = 0; l < fr.layer_q.size(); ++l) {
      const diff::Tensor& part = fr.layer_q[l].value();
      std::vector<double> values = std::move(out[l].values());
      values.insert(values.end(), part.values().begin(), part.values().end());
      const std::size_t rows = out[l].rows() + part.rows();
      out[l] = diff::Tensor({rows, part.cols()}, std::move(values));
    }
  });
  return out;
}

nlohmann::json parameters_json(const Model& model) {
  nlohmann::json out = nlohmann::json::array();
  for (const Parameter* p : all_parameters(const_cast<Model&>(model))) {
    out.push_back({{"name", p->name}, {"shape", p->value.shape()}, {"values", p->value.values()}});
  }
  return out;
}

nlohmann::json checkpoint_json(const Model& model) {
  return {{"config", to_json(model.config)},
          {"task", to_string(model.task)},
          {"n_features", model.n_features},
          {"n_classes", model.n_classes},
          {"parameters", parameters_json(model)}};
}

Model model_from_checkpoint(const nlohmann::json& j) {
  try {
    const Task task = j.at("task").get<std::string>() == "graph" ? Task::kGraph : Task::kNode;
    Model m = build_model(config_from_json(j.at("config")), task, j.at("n_features").get<std::size_t>(),
                          j.at("n_classes").get<std::size_t>());
    auto params = all_parameters(m);
    const auto& stored = j.at("parameters");
    for (Parameter* p : params) {
      auto it = std::find_if(stored.begin(), stored.end(), [&](const auto& s) { return s.at("name") == p->name; });
      if (it == stored.end()) throw ValidationError("checkpoint lacks parameter '" + p->name + "'");
      auto shape = it->at("shape").get<std::vector<std::size_t>>();
      if (shape != p->value.shape()) throw ValidationError("checkpoint shape mismatch for '" + p->name + "'");
      p->value = diff::Tensor(std::move(shape), it->at("values").get<std::vector<double>>());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint JSON: ") + e.what());
  }
}

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << checkpoint_json(model).dump(1) << '\n';
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  try {
    return model_from_checkpoint(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace cgc::model
