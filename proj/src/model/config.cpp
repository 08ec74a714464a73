#include "cgc/model/config.hpp"

#include <charconv>
#include <map>

#include "cgc/error.hpp"

namespace cgc::model {
namespace {

struct Row {
  int layers, hidden, concepts;
  double lr;
  std::optional<int> batch;
  int epochs;
};

const std::map<std::string, Row, std::less<>>& defaults_table() {
  static const std::map<std::string, Row, std::less<>> table{
      {"ba_shapes", {4, 10, 10, 0.001, std::nullopt, 7000}},
      {"ba_grid", {4, 10, 10, 0.001, std::nullopt, 3000}},
      {"tree_grid", {7, 20, 20, 0.0001, std::nullopt, 20000}},
      {"tree_cycles", {3, 10, 10, 0.001, std::nullopt, 7000}},
      {"ba_community", {6, 20, 20, 0.001, std::nullopt, 10000}},
      {"grid", {5, 20, 10, 0.001, 16, 300}},
      {"grid_house", {4, 20, 10, 0.001, 16, 2000}},
      {"stars", {2, 10, 4, 0.001, 16, 300}},
      {"house_colour", {2, 10, 10, 0.001, 16, 300}},
      {"mutagenicity", {3, 40, 10, 0.001, 16, 1000}},
      {"reddit_binary", {3, 32, 10, 0.001, 16, 1000}},
  };
  return table;
}

double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    const double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  }
}

long long to_int(std::string_view key, std::string_view v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParameterError("config key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace

LayerKind parse_layer_kind(std::string_view name) {
  if (name == "cgc") return LayerKind::kCgc;
  if (name == "pure_cgc") return LayerKind::kPureCgc;
  if (name == "gcn") return LayerKind::kGcn;
  if (name == "gat") return LayerKind::kGat;
  throw ParameterError("unknown layer kind '" + std::string(name) + "'");
}

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kCgc: return "cgc";
    case LayerKind::kPureCgc: return "pure_cgc";
    case LayerKind::kGcn: return "gcn";
    case LayerKind::kGat: return "gat";
  }
  return "?";
}

std::string to_string(Task task) { return task == Task::kNode ? "node" : "graph"; }

void ModelConfig::validate() const {
  if (n_layers < 1) throw ParameterError("n_layers must be >= 1");
  if (hidden < 2 || concept_width < 2) throw ParameterError("hidden and concept widths must be >= 2");
  if (epochs < 0) throw ParameterError("epochs must be >= 0");
  if (!(lr >= 0)) throw ParameterError("lr must be >= 0");
  if (batch_size && *batch_size < 1) throw ParameterError("batch_size must be >= 1");
  if (history_every < 1) throw ParameterError("history_every must be >= 1");
  if (!(softmax_scale > 0)) throw ParameterError("softmax_scale must be positive");
  if (!(train_fraction > 0 && train_fraction < 1)) throw ParameterError("train_fraction must lie in (0, 1)");
  if (optimizer != "sgd" && optimizer != "adam") throw ParameterError("optimizer must be sgd or adam");
  reg.validate();
}

ModelConfig dataset_defaults(std::string_view dataset) {
  const auto& table = defaults_table();
  auto it = table.find(dataset);
  if (it == table.end()) throw ParameterError("no defaults for dataset '" + std::string(dataset) + "'");
  ModelConfig c;
  c.n_layers = it->second.layers;
  c.hidden = it->second.hidden;
  c.concept_width = it->second.concepts;
  c.lr = it->second.lr;
  c.batch_size = it->second.batch;
  c.epochs = it->second.epochs;
  return c;
}

nlohmann::json to_json(const ModelConfig& c) {
  return {{"layer_kind", to_string(c.layer_kind)},
          {"n_layers", c.n_layers},
          {"hidden", c.hidden},
          {"concept_width", c.concept_width},
          {"lr", c.lr},
          {"batch_size", c.batch_size ? nlohmann::json(*c.batch_size) : nlohmann::json(nullptr)},
          {"epochs", c.epochs},
          {"gamma_target", c.reg.gamma_target},
          {"eta_target", c.reg.eta_target},
          {"lambda_a", c.reg.lambda_a},
          {"lambda_b", c.reg.lambda_b},
          {"seed", c.seed},
          {"softmax_scale", c.softmax_scale},
          {"optimizer", c.optimizer},
          {"momentum", c.momentum},
          {"history_every", c.history_every},
          {"train_fraction", c.train_fraction}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.layer_kind = parse_layer_kind(j.at("layer_kind").get<std::string>());
    c.n_layers = j.at("n_layers").get<int>();
    c.hidden = j.at("hidden").get<int>();
    c.concept_width = j.at("concept_width").get<int>();
    c.lr = j.at("lr").get<double>();
    if (!j.at("batch_size").is_null()) c.batch_size = j.at("batch_size").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.reg.gamma_target = j.at("gamma_target").get<double>();
    c.reg.eta_target = j.at("eta_target").get<double>();
    c.reg.lambda_a = j.at("lambda_a").get<double>();
    c.reg.lambda_b = j.at("lambda_b").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.softmax_scale = j.at("softmax_scale").get<double>();
    c.optimizer = j.at("optimizer").get<std::string>();
    c.momentum = j.at("momentum").get<double>();
    c.history_every = j.at("history_every").get<int>();
    c.train_fraction = j.at("train_fraction").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model config JSON: ") + e.what());
  }
  c.validate();
  return c;
}

void apply_override(ModelConfig& c, std::string_view key, std::string_view value) {
  if (key == "layer_kind") c.layer_kind = parse_layer_kind(value);
  else if (key == "n_layers") c.n_layers = static_cast<int>(to_int(key, value));
  else if (key == "hidden") c.hidden = static_cast<int>(to_int(key, value));
  else if (key == "concept_width") c.concept_width = static_cast<int>(to_int(key, value));
  else if (key == "lr") c.lr = to_double(key, value);
  else if (key == "batch_size") {
    if (value == "-" || value == "none") c.batch_size.reset();
    else c.batch_size = static_cast<int>(to_int(key, value));
  }
  else if (key == "epochs") c.epochs = static_cast<int>(to_int(key, value));
  else if (key == "gamma_target") c.reg.gamma_target = to_double(key, value);
  else if (key == "eta_target") c.reg.eta_target = to_double(key, value);
  else if (key == "lambda_a") c.reg.lambda_a = to_double(key, value);
  else if (key == "lambda_b") c.reg.lambda_b = to_double(key, value);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (key == "softmax_scale") c.softmax_scale = to_double(key, value);
  else if (key == "optimizer") c.optimizer = std::string(value);
  else if (key == "momentum") c.momentum = to_double(key, value);
  else if (key == "history_every") c.history_every = static_cast<int>(to_int(key, value));
  else if (key == "train_fraction") c.train_fraction = to_double(key, value);
  else throw ParameterError("unknown config key '" + std::string(key) + "'");
}

}  // namespace cgc::model
