#include "cgc/harness/studies.hpp"

#include <cmath>

#include "cgc/concepts/concepts.hpp"
#include "cgc/error.hpp"
#include "cgc/graph/split.hpp"
#include "cgc/harness/csv.hpp"

namespace cgc::harness {
namespace {

constexpr const char* kSkipped = "SKIPPED";
constexpr const char* kFailed = "FAILED";

}  // namespace

std::vector<DepthEntry> depth_sweep(const ExperimentSpec& base, model::LayerKind kind, const std::vector<int>& depths,
                                    const Progress& progress) {
  if (depths.empty()) throw ParameterError("depth_sweep: no depths given");
  std::vector<DepthEntry> out;
  for (int d : depths) {
    ExperimentSpec spec = base;
    spec.kinds = {kind};
    spec.overrides.emplace_back("n_layers", std::to_string(d));
    auto report = run_experiment(spec, progress);
    out.push_back({d, std::move(report.kinds.front())});
  }
  return out;
}

std::string depth_sweep_csv(const std::vector<DepthEntry>& entries) {
  std::string out = csv_line({"depth", "layer", "accuracy_mean", "accuracy_lo", "accuracy_hi", "completeness_mean",
                              "completeness_lo", "completeness_hi"});
  for (const auto& e : entries) {
    const auto& r = e.report;
    const Summary acc = r.accuracy.value_or(Summary{NAN, NAN, NAN, 0});
    for (std::size_t l = 0; l < r.completeness.size(); ++l) {
      const auto& c = r.completeness[l];
      out += csv_line({std::to_string(e.depth), std::to_string(l + 1), format_double(acc.mean), format_double(acc.lo),
                       format_double(acc.hi), format_double(c.mean), format_double(c.lo), format_double(c.hi)});
    }
  }
  return out;
}

std::vector<TracePoint> epoch_trace(const ExperimentSpec& spec, model::LayerKind kind, int seed, int cadence) {
  if (cadence < 1) throw ParameterError("epoch_trace: cadence must be >= 1, got " + std::to_string(cadence));
  const auto data = load_dataset(spec.dataset, spec.data_seed, spec.tu_dir);
  const auto cfg = spec.config(kind, seed);
  cfg.validate();
  const auto split = graph::split(data.labels(), cfg.train_fraction, cfg.seed);
  auto m = model::build_model(cfg, data.task(), data.n_features(), data.n_classes());
  std::vector<TracePoint> out;
  model::TrainHook hook{cadence, [&](int epoch, model::Model& mm) {
                          out.push_back({epoch, 100.0 * model::evaluate(mm, data, split),
                                         concepts::concept_evolution(mm, data, split)});
                        }};
  model::train(m, data, split, hook);
  return out;
}

std::string epoch_trace_csv(const std::vector<TracePoint>& points) {
  const std::size_t layers = points.empty() ? 0 : points.front().completeness.size();
  CsvRow header{"epoch", "accuracy"};
  for (std::size_t l = 1; l <= layers; ++l) header.push_back("completeness_" + std::to_string(l));
  std::string out = csv_line(header);
  for (const auto& p : points) {
    CsvRow row{std::to_string(p.epoch), format_double(p.accuracy)};
    for (double c : p.completeness) row.push_back(format_double(c));
    out += csv_line(row);
  }
  return out;
}

std::string gamma_eta_csv(std::span<const ExperimentReport> reports) {
  std::string out = csv_line({"dataset", "kind", "seed", "layer", "gamma", "eta"});
  for (const auto& rep : reports) {
    for (const auto& k : rep.kinds) {
      for (const auto& s : k.seeds) {
        if (!s.ok) continue;
        for (std::size_t l = 0; l < s.gamma.size(); ++l) {
          out += csv_line({rep.dataset, model::to_string(k.kind), std::to_string(s.seed), std::to_string(l + 1),
                           format_double(s.gamma[l]), format_double(l < s.eta.size() ? s.eta[l] : NAN)});
        }
      }
    }
  }
  return out;
}

ReproduceResult reproduce_tables(const ReproduceSpec& spec, const Progress& progress) {
  ReproduceResult out;
  out.accuracy.kinds = out.completeness.kinds = spec.kinds;
  for (const auto& ds : spec.datasets) {
    out.accuracy.datasets.push_back(ds);
    out.completeness.datasets.push_back(ds);
    std::vector<TableCell> acc_row(spec.kinds.size()), comp_row(spec.kinds.size());
    if (!dataset_available(ds, spec.tu_dir)) {
      if (progress) progress(ds + ": " + kSkipped + " (no TU files)");
      for (auto& c : acc_row) c.status = TableCell::Status::kSkipped;
      comp_row = acc_row;
    } else {
      ExperimentSpec es;
      es.dataset = ds;
      es.kinds = spec.kinds;
      es.n_seeds = spec.n_seeds;
      es.overrides = spec.overrides;
      if (auto it = spec.dataset_overrides.find(ds); it != spec.dataset_overrides.end()) {
        es.overrides.insert(es.overrides.end(), it->second.begin(), it->second.end());
      }
      es.workers = spec.workers;
      es.tu_dir = spec.tu_dir;
      ExperimentReport rep;
      try {
        rep = run_experiment(es, progress);
      } catch (const Error& e) {
        if (progress) progress(ds + ": " + kFailed + " (" + e.what() + ")");
        for (auto& c : acc_row) c.status = TableCell::Status::kFailed;
        comp_row = acc_row;
        out.all_ok = false;
        out.accuracy.cells.push_back(acc_row);
        out.completeness.cells.push_back(comp_row);
        continue;
      }
      if (!rep.all_ok()) out.all_ok = false;
      for (std::size_t k = 0; k < rep.kinds.size(); ++k) {
        const auto& kr = rep.kinds[k];
        if (!kr.accuracy || kr.completeness.empty()) {
          acc_row[k].status = comp_row[k].status = TableCell::Status::kFailed;
          continue;
        }
        acc_row[k] = {TableCell::Status::kOk, kr.accuracy->mean, kr.accuracy->lo, kr.accuracy->hi};
        const auto& last = kr.completeness.back();
        comp_row[k] = {TableCell::Status::kOk, last.mean, last.lo, last.hi};
      }
      out.reports.push_back(std::move(rep));
    }
    out.accuracy.cells.push_back(std::move(acc_row));
    out.completeness.cells.push_back(std::move(comp_row));
  }
  return out;
}

void write_reproduce(const ReproduceResult& result, const std::filesystem::path& out_dir) {
  write_text(out_dir / "accuracy.csv", table_csv(result.accuracy));
  write_text(out_dir / "completeness.csv", table_csv(result.completeness));
  write_text(out_dir / "seeds.csv", report_csv(result.reports));
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : result.reports) j.push_back(to_json(r));
  write_text(out_dir / "report.json", j.dump(2) + "\n");
}

std::string table_csv(const Table& table) {
  CsvRow header{"dataset"};
  for (auto k : table.kinds) {
    const auto name = model::to_string(k);
    header.insert(header.end(), {name + "_mean", name + "_lo", name + "_hi"});
  }
  std::string out = csv_line(header);
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    CsvRow row{table.datasets[d]};
    for (const auto& c : table.cells.at(d)) {
      switch (c.status) {
        case TableCell::Status::kOk:
          row.insert(row.end(), {format_double(c.mean), format_double(c.lo), format_double(c.hi)});
          break;
        case TableCell::Status::kSkipped: row.insert(row.end(), 3, kSkipped); break;
        case TableCell::Status::kFailed: row.insert(row.end(), 3, kFailed); break;
      }
    }
    out += csv_line(row);
  }
  return out;
}

Table parse_table_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "dataset" || (rows.front().size() - 1) % 3 != 0) {
    throw ParseError("table csv: unexpected header");
  }
  Table t;
  const auto& header = rows.front();
  for (std::size_t i = 1; i < header.size(); i += 3) {
    const auto& h = header[i];
    if (h.size() < 5 || h.substr(h.size() - 5) != "_mean") throw ParseError("table csv: bad column '" + h + "'");
    t.kinds.push_back(model::parse_layer_kind(h.substr(0, h.size() - 5)));
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) throw ParseError("table csv: row " + std::to_string(r + 1) + " is ragged");
    t.datasets.push_back(row[0]);
    std::vector<TableCell> cells;
    for (std::size_t i = 1; i < row.size(); i += 3) {
      TableCell c;
      if (row[i] == kSkipped) {
        c.status = TableCell::Status::kSkipped;
      } else if (row[i] == kFailed) {
        c.status = TableCell::Status::kFailed;
      } else {
        c.mean = parse_double(row[i]);
        c.lo = parse_double(row[i + 1]);
        c.hi = parse_double(row[i + 2]);
      }
      cells.push_back(c);
    }
    t.cells.push_back(std::move(cells));
  }
  return t;
}

}  // namespace cgc::harness
