#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgc/harness/experiment.hpp"

namespace cgc::harness {

struct DepthEntry {
  int depth = 0;
  KindReport report;
};

// run_experiment for one layer kind with n_layers overridden per depth.
std::vector<DepthEntry> depth_sweep(const ExperimentSpec& base, model::LayerKind kind, const std::vector<int>& depths,
                                    const Progress& progress = {});
// depth,layer,accuracy_mean,accuracy_lo,accuracy_hi,completeness_mean,completeness_lo,completeness_hi
std::string depth_sweep_csv(const std::vector<DepthEntry>& entries);

struct TracePoint {
  int epoch = 0;
  double accuracy = 0;  // percent
  std::vector<double> completeness;
};

// One training run scored every `cadence` epochs.
std::vector<TracePoint> epoch_trace(const ExperimentSpec& spec, model::LayerKind kind, int seed, int cadence);
// epoch,accuracy,completeness_1..completeness_L
std::string epoch_trace_csv(const std::vector<TracePoint>& points);

// dataset,kind,seed,layer,gamma,eta -- final per-layer mixing weights.
std::string gamma_eta_csv(std::span<const ExperimentReport> reports);

struct ReproduceSpec {
  std::vector<std::string> datasets = all_datasets();
  std::vector<model::LayerKind> kinds = all_layer_kinds();
  int n_seeds = 5;
  Overrides overrides;
  // Per-dataset overrides applied after `overrides`.
  std::map<std::string, Overrides> dataset_overrides;
  std::size_t workers = 0;
  std::optional<std::filesystem::path> tu_dir;
};

struct TableCell {
  enum class Status { kOk, kSkipped, kFailed } status = Status::kOk;
  double mean = 0;
  double lo = 0;
  double hi = 0;

  bool operator==(const TableCell&) const = default;
};

struct Table {
  std::vector<model::LayerKind> kinds;
  std::vector<std::string> datasets;
  std::vector<std::vector<TableCell>> cells;  // [dataset][kind]

  bool operator==(const Table&) const = default;
};

struct ReproduceResult {
  std::vector<ExperimentReport> reports;
  Table accuracy;
  Table completeness;  // final layer
  bool all_ok = true;
};

// Runs every dataset x kind cell. Real-world datasets without TU files are
// marked SKIPPED; cells whose seeds all failed are FAILED.
ReproduceResult reproduce_tables(const ReproduceSpec& spec, const Progress& progress = {});
// Writes accuracy.csv, completeness.csv, seeds.csv and report.json.
void write_reproduce(const ReproduceResult& result, const std::filesystem::path& out_dir);

// dataset, then <kind>_mean,<kind>_lo,<kind>_hi per kind.
std::string table_csv(const Table& table);
Table parse_table_csv(std::string_view text);

}  // namespace cgc::harness
