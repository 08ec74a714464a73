// Command-line front end: dataset generation, training, evaluation and the
// table/figure studies. Every command writes under --out.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgc/concepts/concepts.hpp"
#include "cgc/error.hpp"
#include "cgc/graph/json_io.hpp"
#include "cgc/graph/split.hpp"
#include "cgc/graph/tu_format.hpp"
#include "cgc/harness/csv.hpp"
#include "cgc/harness/studies.hpp"
#include "cgc/harness/viz.hpp"
#include "cgc/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace cgc;

namespace {

struct Globals {
  int seed = 0;
  std::string out = "out";
  std::string config_file;
  std::string tu_dir;
  std::size_t workers = 0;
  std::vector<std::string> sets;
  std::optional<int> epochs;
  bool quiet = false;
};

std::optional<fs::path> tu_dir_of(const Globals& g) {
  if (g.tu_dir.empty()) return std::nullopt;
  return fs::path(g.tu_dir);
}

// Config file first, then --set pairs, then --epochs.
harness::Overrides overrides_of(const Globals& g) {
  harness::Overrides out;
  if (!g.config_file.empty()) out = harness::parse_key_values(harness::read_text(g.config_file));
  for (const auto& s : g.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParameterError("--set expects key=value, got '" + s + "'");
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (g.epochs) out.emplace_back("epochs", std::to_string(*g.epochs));
  return out;
}

harness::Progress progress_of(const Globals& g) {
  if (g.quiet) return {};
  return [](const std::string& line) { std::cerr << line << std::endl; };
}

std::vector<model::LayerKind> parse_kinds(const std::vector<std::string>& names) {
  if (names.empty()) return harness::all_layer_kinds();
  std::vector<model::LayerKind> out;
  for (const auto& n : names) out.push_back(model::parse_layer_kind(n));
  return out;
}

harness::ExperimentSpec experiment_of(const Globals& g, const std::string& dataset,
                                      const std::vector<std::string>& kinds, int n_seeds) {
  harness::ExperimentSpec spec;
  spec.dataset = dataset;
  spec.kinds = parse_kinds(kinds);
  spec.n_seeds = n_seeds;
  spec.overrides = overrides_of(g);
  spec.workers = g.workers;
  spec.tu_dir = tu_dir_of(g);
  return spec;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void print_report(const harness::ExperimentReport& rep) {
  for (const auto& k : rep.kinds) {
    std::cout << rep.dataset << " " << model::to_string(k.kind) << ": ";
    if (!k.accuracy) {
      std::cout << "all seeds failed\n";
      continue;
    }
    std::cout << "accuracy " << fixed2(k.accuracy->mean) << " (" << fixed2(k.accuracy->lo) << ", "
              << fixed2(k.accuracy->hi) << ")";
    if (!k.completeness.empty()) {
      const auto& c = k.completeness.back();
      std::cout << "  completeness " << fixed2(c.mean) << " (" << fixed2(c.lo) << ", " << fixed2(c.hi) << ")";
    }
    if (k.n_failed()) std::cout << "  [" << k.n_failed() << " seed(s) failed]";
    std::cout << "\n";
  }
}

struct LoadedModel {
  model::Model model;
  std::string dataset;
};

LoadedModel load_model(const std::string& path, const std::string& dataset_flag) {
  const auto j = nlohmann::json::parse(harness::read_text(path));
  LoadedModel out{model::model_from_checkpoint(j), dataset_flag};
  if (out.dataset.empty()) out.dataset = j.value("dataset", std::string());
  if (out.dataset.empty()) throw ParameterError("checkpoint has no dataset; pass --dataset");
  return out;
}

int cmd_generate(const Globals& g, const std::string& dataset) {
  const auto data = harness::load_dataset(dataset, static_cast<std::uint64_t>(g.seed), tu_dir_of(g));
  const fs::path out(g.out);
  nlohmann::json j = data.task() == model::Task::kNode ? graph::to_json(data.graph()) : graph::to_json(data.graph_set());
  harness::write_text(out / (dataset + ".json"), j.dump() + "\n");
  if (data.task() == model::Task::kGraph) graph::save_tu(data.graph_set(), out / "tu");
  std::cout << dataset << ": " << data.n_items() << (data.task() == model::Task::kNode ? " nodes" : " graphs") << ", "
            << data.n_features() << " feature(s), " << data.n_classes() << " classes -> " << (out / (dataset + ".json"))
            << "\n";
  return 0;
}

int cmd_train(const Globals& g, const std::string& dataset, const std::string& kind) {
  harness::ExperimentSpec spec = experiment_of(g, dataset, {kind}, 1);
  spec.validate();
  const auto data = harness::load_dataset(dataset, harness::kDataSeed, spec.tu_dir);
  const auto cfg = spec.config(model::parse_layer_kind(kind), g.seed);
  const auto split = graph::split(data.labels(), cfg.train_fraction, cfg.seed);
  auto m = model::build_model(cfg, data.task(), data.n_features(), data.n_classes());
  const auto history = model::train(m, data, split);
  const double acc = 100.0 * model::evaluate(m, data, split);
  const auto layers = concepts::concept_layers(m, data, split);

  const fs::path out(g.out);
  const std::string stem = dataset + "_" + kind + "_seed" + std::to_string(g.seed);
  auto ck = model::checkpoint_json(m);
  ck["dataset"] = dataset;
  harness::write_text(out / (stem + ".json"), ck.dump(2) + "\n");
  harness::write_text(out / (stem + "_history.csv"), harness::history_csv(history));
  nlohmann::json concepts = nlohmann::json::array();
  for (const auto& l : layers) concepts.push_back(concepts::report_json(l));
  harness::write_text(out / (stem + "_concepts.json"), concepts.dump(2) + "\n");

  std::cout << stem << ": test accuracy " << fixed2(acc) << "\n";
  for (const auto& l : layers) {
    std::cout << "  layer " << l.layer << ": " << l.concepts.table.size() << " concepts, completeness "
              << fixed2(l.completeness) << "\n";
  }
  return 0;
}

int cmd_eval(const Globals& g, const std::string& checkpoint, const std::string& dataset_flag) {
  auto lm = load_model(checkpoint, dataset_flag);
  const auto data = harness::load_dataset(lm.dataset, harness::kDataSeed, tu_dir_of(g));
  const auto split = graph::split(data.labels(), lm.model.config.train_fraction, lm.model.config.seed);
  std::cout << "test accuracy " << fixed2(100.0 * model::evaluate(lm.model, data, split)) << "\n";
  return 0;
}

int cmd_completeness(const Globals& g, const std::string& checkpoint, const std::string& dataset_flag) {
  auto lm = load_model(checkpoint, dataset_flag);
  const auto data = harness::load_dataset(lm.dataset, harness::kDataSeed, tu_dir_of(g));
  const auto split = graph::split(data.labels(), lm.model.config.train_fraction, lm.model.config.seed);
  nlohmann::json all = nlohmann::json::array();
  for (const auto& l : concepts::concept_layers(lm.model, data, split)) {
    std::cout << "layer " << l.layer << ": " << l.concepts.table.size() << " concepts, completeness "
              << fixed2(l.completeness) << "\n";
    all.push_back(concepts::report_json(l));
  }
  harness::write_text(fs::path(g.out) / (fs::path(checkpoint).stem().string() + "_concepts.json"), all.dump(2) + "\n");
  return 0;
}

int cmd_trace(const Globals& g, const std::string& dataset, const std::vector<std::string>& kinds, int n_seeds) {
  auto spec = experiment_of(g, dataset, kinds.empty() ? std::vector<std::string>{"cgc", "pure_cgc"} : kinds, n_seeds);
  spec.out_dir = fs::path(g.out) / "runs";
  const auto rep = harness::run_experiment(spec, progress_of(g));
  harness::write_text(fs::path(g.out) / (dataset + "_gamma_eta.csv"), harness::gamma_eta_csv({&rep, 1}));
  for (const auto& k : rep.kinds) {
    std::cout << model::to_string(k.kind) << " gamma:";
    for (double v : k.gamma_mean) std::cout << " " << fixed2(v);
    std::cout << "  eta:";
    for (double v : k.eta_mean) std::cout << " " << fixed2(v);
    std::cout << "\n";
  }
  return rep.all_ok() ? 0 : 1;
}

int cmd_depth_sweep(const Globals& g, const std::string& dataset, const std::string& kind,
                    const std::vector<int>& depths, int n_seeds) {
  const auto spec = experiment_of(g, dataset, {kind}, n_seeds);
  const auto entries = harness::depth_sweep(spec, model::parse_layer_kind(kind), depths, progress_of(g));
  harness::write_text(fs::path(g.out) / (dataset + "_depth_sweep.csv"), harness::depth_sweep_csv(entries));
  bool ok = true;
  for (const auto& e : entries) {
    ok = ok && e.report.n_failed() == 0;
    std::cout << "depth " << e.depth << ": accuracy "
              << (e.report.accuracy ? fixed2(e.report.accuracy->mean) : std::string("n/a")) << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_epoch_trace(const Globals& g, const std::string& dataset, const std::string& kind, int cadence) {
  const auto spec = experiment_of(g, dataset, {kind}, 1);
  spec.validate();
  const auto points = harness::epoch_trace(spec, model::parse_layer_kind(kind), g.seed, cadence);
  harness::write_text(fs::path(g.out) / (dataset + "_" + kind + "_epoch_trace.csv"), harness::epoch_trace_csv(points));
  std::cout << points.size() << " checkpoints written\n";
  return 0;
}

int cmd_viz(const Globals& g, const std::string& checkpoint, const std::string& dataset_flag, int layer,
            int concept_id, std::size_t max_instances) {
  auto lm = load_model(checkpoint, dataset_flag);
  const auto data = harness::load_dataset(lm.dataset, harness::kDataSeed, tu_dir_of(g));
  const fs::path stem = fs::path(g.out) / (lm.dataset + "_l" + std::to_string(layer) + "_c" + std::to_string(concept_id));
  harness::export_concept_viz(lm.model, data, layer, concept_id, stem, max_instances);
  std::cout << "wrote " << stem.string() << ".dot and .json\n";
  return 0;
}

int cmd_reproduce(const Globals& g, const std::vector<std::string>& datasets, const std::vector<std::string>& kinds,
                  int n_seeds) {
  harness::ReproduceSpec spec;
  if (!datasets.empty()) spec.datasets = datasets;
  spec.kinds = parse_kinds(kinds);
  spec.n_seeds = n_seeds;
  spec.overrides = overrides_of(g);
  spec.workers = g.workers;
  spec.tu_dir = tu_dir_of(g);
  const auto result = harness::reproduce_tables(spec, progress_of(g));
  harness::write_reproduce(result, g.out);
  for (const auto& rep : result.reports) print_report(rep);
  std::cout << "tables written to " << g.out << "\n";
  return result.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept graph convolution experiments"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Run seed (split and initialisation); data seed for generate")
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--config", g.config_file, "key = value file overriding the dataset defaults")
      ->check(CLI::ExistingFile);
  app.add_option("--tu-dir", g.tu_dir, "Directory holding TU datasets (Mutagenicity, REDDIT-BINARY)");
  app.add_option("--workers", g.workers, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--set", g.sets, "Override one config key, e.g. --set lr=0.01 (repeatable)");
  app.add_option("--epochs", g.epochs, "Shorthand for --set epochs=N");
  app.add_flag("-q,--quiet", g.quiet, "No per-run progress on stderr");

  std::string dataset, kind = "cgc", checkpoint;
  std::vector<std::string> datasets, kinds;
  int n_seeds = 5, cadence = 100, layer = 1, concept_id = 0;
  std::size_t max_instances = 5;
  std::vector<int> depths{3, 4, 5, 6, 7, 8};

  auto* generate = app.add_subcommand("generate", "Write a dataset as JSON (and TU files for graph sets)");
  generate->add_option("dataset", dataset)->required();

  auto* train = app.add_subcommand("train", "Train one model and write checkpoint, history and concepts");
  train->add_option("dataset", dataset)->required();
  train->add_option("--kind", kind, "cgc, pure_cgc, gcn or gat")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Test accuracy of a checkpoint");
  eval->add_option("checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  eval->add_option("--dataset", dataset, "Defaults to the dataset recorded in the checkpoint");

  auto* completeness = app.add_subcommand("completeness", "Per-layer concepts and completeness of a checkpoint");
  completeness->add_option("checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  completeness->add_option("--dataset", dataset);

  auto* trace = app.add_subcommand("trace-gamma-eta", "Final gamma/eta per layer over seeds");
  trace->add_option("dataset", dataset)->required();
  trace->add_option("--kinds", kinds, "Default: cgc pure_cgc");
  trace->add_option("--seeds", n_seeds)->capture_default_str();

  auto* depth = app.add_subcommand("depth-sweep", "Accuracy and completeness per model depth");
  depth->add_option("dataset", dataset)->required();
  depth->add_option("--kind", kind)->capture_default_str();
  depth->add_option("--depths", depths)->capture_default_str();
  depth->add_option("--seeds", n_seeds)->capture_default_str();

  auto* epoch = app.add_subcommand("epoch-trace", "Accuracy and completeness every N epochs of one run");
  epoch->add_option("dataset", dataset)->required();
  epoch->add_option("--kind", kind)->capture_default_str();
  epoch->add_option("--cadence", cadence)->capture_default_str();

  auto* viz = app.add_subcommand("viz", "Export a concept's neighbourhoods as DOT and JSON");
  viz->add_option("checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  viz->add_option("--dataset", dataset);
  viz->add_option("--layer", layer)->capture_default_str();
  viz->add_option("--concept", concept_id)->capture_default_str();
  viz->add_option("--max", max_instances, "Concept members to show")->capture_default_str();

  auto* reproduce = app.add_subcommand("reproduce", "Accuracy and completeness tables over datasets and layer kinds");
  reproduce->add_option("--datasets", datasets, "Default: every dataset");
  reproduce->add_option("--kinds", kinds, "Default: cgc pure_cgc gcn gat");
  reproduce->add_option("--seeds", n_seeds)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!g.quiet) std::cerr << "kernels: " << simd::isa_name(simd::active().isa) << "\n";
    if (*generate) return cmd_generate(g, dataset);
    if (*train) return cmd_train(g, dataset, kind);
    if (*eval) return cmd_eval(g, checkpoint, dataset);
    if (*completeness) return cmd_completeness(g, checkpoint, dataset);
    if (*trace) return cmd_trace(g, dataset, kinds, n_seeds);
    if (*depth) return cmd_depth_sweep(g, dataset, kind, depths, n_seeds);
    if (*epoch) return cmd_epoch_trace(g, dataset, kind, cadence);
    if (*viz) return cmd_viz(g, checkpoint, dataset, layer, concept_id, max_instances);
    if (*reproduce) return cmd_reproduce(g, datasets, kinds, n_seeds);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
