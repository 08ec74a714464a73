#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cgc/harness/datasets.hpp"
#include "cgc/harness/stats.hpp"
#include "cgc/model/model.hpp"

namespace cgc::harness {

using Overrides = std::vector<std::pair<std::string, std::string>>;

const std::vector<model::LayerKind>& all_layer_kinds();

struct ExperimentSpec {
  std::string dataset;
  std::vector<model::LayerKind> kinds = all_layer_kinds();
  int n_seeds = 5;
  // Applied in order on top of the dataset defaults.
  Overrides overrides;
  // When set, every run writes its checkpoint and history here.
  std::optional<std::filesystem::path> out_dir;
  std::size_t workers = 0;
  std::uint64_t data_seed = kDataSeed;
  std::optional<std::filesystem::path> tu_dir;

  void validate() const;
  // Dataset defaults + overrides, with the layer kind and seed set.
  model::ModelConfig config(model::LayerKind kind, int seed) const;
};

struct SeedResult {
  int seed = 0;
  bool ok = false;
  std::string error;
  double accuracy = std::numeric_limits<double>::quiet_NaN();  // percent
  std::vector<double> completeness;                            // percent, per layer
  std::vector<double> gamma;                                   // per layer, NaN if absent
  std::vector<double> eta;
  double runtime_s = 0;  // not serialised to CSV

  bool same_outcome(const SeedResult& o) const;
};

struct KindReport {
  model::LayerKind kind = model::LayerKind::kCgc;
  std::vector<SeedResult> seeds;
  // Over surviving seeds; empty when every seed failed.
  std::optional<Summary> accuracy;
  std::vector<Summary> completeness;
  std::vector<double> gamma_mean;
  std::vector<double> eta_mean;

  std::size_t n_failed() const;
  void aggregate();
};

struct ExperimentReport {
  std::string dataset;
  std::vector<KindReport> kinds;

  bool all_ok() const;
  const KindReport& at(model::LayerKind kind) const;
};

using Progress = std::function<void(const std::string&)>;

// Trains one model on `data` and scores it. Divergence or any library error
// is captured in the result rather than thrown.
SeedResult run_seed(const model::TaskData& data, const model::ModelConfig& config,
                    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// Every (kind, seed) pair with seeds 0..n_seeds-1, run on the worker pool.
ExperimentReport run_experiment(const ExperimentSpec& spec, const Progress& progress = {});

// One row per (kind, seed): dataset,kind,seed,status,error,accuracy,completeness,gamma,eta
// with per-layer lists joined by ';'.
std::string report_csv(std::span<const ExperimentReport> reports);
std::vector<ExperimentReport> parse_report_csv(std::string_view text);

nlohmann::json to_json(const ExperimentReport& report);

// epoch,task_loss,reg_loss,train_accuracy,test_accuracy,gamma_1..,eta_1..
std::string history_csv(const model::TrainHistory& history);

}  // namespace cgc::harness
