#include "cgc/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>

#include "cgc/concepts/concepts.hpp"
#include "cgc/error.hpp"
#include "cgc/graph/split.hpp"
#include "cgc/harness/csv.hpp"
#include "cgc/harness/pool.hpp"

namespace cgc::harness {
namespace {

bool same_number(double a, double b) { return format_double(a) == format_double(b); }

bool same_numbers(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_number(a[i], b[i])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += format_double(xs[i]);
  }
  return out;
}

std::vector<double> split_numbers(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto semi = s.find(';', pos);
    out.push_back(parse_double(s.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos)));
    if (semi == std::string_view::npos) break;
    pos = semi + 1;
  }
  return out;
}

// Mean of the non-NaN entries of column l, NaN when there are none.
std::vector<double> layer_means(const std::vector<const SeedResult*>& ok,
                                std::vector<double> SeedResult::*field) {
  std::size_t width = 0;
  for (auto* s : ok) width = std::max(width, (s->*field).size());
  std::vector<double> out(width, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t l = 0; l < width; ++l) {
    std::vector<double> xs;
    for (auto* s : ok) {
      if (l < (s->*field).size() && !std::isnan((s->*field)[l])) xs.push_back((s->*field)[l]);
    }
    if (!xs.empty()) out[l] = mean(xs);
  }
  return out;
}

const std::vector<std::string> kReportHeader{"dataset", "kind",         "seed",  "status", "error",
                                             "accuracy", "completeness", "gamma", "eta"};

}  // namespace

const std::vector<model::LayerKind>& all_layer_kinds() {
  static const std::vector<model::LayerKind> v{model::LayerKind::kCgc, model::LayerKind::kPureCgc,
                                               model::LayerKind::kGcn, model::LayerKind::kGat};
  return v;
}

void ExperimentSpec::validate() const {
  if (n_seeds < 1) throw ParameterError("n_seeds must be >= 1, got " + std::to_string(n_seeds));
  if (kinds.empty()) throw ParameterError("no layer kinds requested");
  const auto names = all_datasets();
  if (std::find(names.begin(), names.end(), dataset) == names.end()) {
    throw ParameterError("unknown dataset '" + dataset + "'");
  }
  config(kinds.front(), 0).validate();
}

model::ModelConfig ExperimentSpec::config(model::LayerKind kind, int seed) const {
  model::ModelConfig c = model::dataset_defaults(dataset);
  for (const auto& [k, v] : overrides) model::apply_override(c, k, v);
  c.layer_kind = kind;
  c.seed = static_cast<std::uint64_t>(seed);
  return c;
}

bool SeedResult::same_outcome(const SeedResult& o) const {
  return seed == o.seed && ok == o.ok && error == o.error && same_number(accuracy, o.accuracy) &&
         same_numbers(completeness, o.completeness) && same_numbers(gamma, o.gamma) && same_numbers(eta, o.eta);
}

std::size_t KindReport::n_failed() const {
  return static_cast<std::size_t>(std::count_if(seeds.begin(), seeds.end(), [](const SeedResult& s) { return !s.ok; }));
}

void KindReport::aggregate() {
  std::vector<const SeedResult*> ok;
  for (const auto& s : seeds) {
    if (s.ok) ok.push_back(&s);
  }
  accuracy.reset();
  completeness.clear();
  gamma_mean.clear();
  eta_mean.clear();
  if (ok.empty()) return;
  std::vector<double> acc;
  for (auto* s : ok) acc.push_back(s->accuracy);
  accuracy = summarize(acc);
  const std::size_t layers = ok.front()->completeness.size();
  for (std::size_t l = 0; l < layers; ++l) {
    std::vector<double> xs;
    for (auto* s : ok) xs.push_back(s->completeness.at(l));
    completeness.push_back(summarize(xs));
  }
  gamma_mean = layer_means(ok, &SeedResult::gamma);
  eta_mean = layer_means(ok, &SeedResult::eta);
}

bool ExperimentReport::all_ok() const {
  for (const auto& k : kinds) {
    if (k.n_failed() > 0) return false;
  }
  return true;
}

const KindReport& ExperimentReport::at(model::LayerKind kind) const {
  for (const auto& k : kinds) {
    if (k.kind == kind) return k;
  }
  throw ParameterError("report for " + dataset + " has no " + model::to_string(kind) + " results");
}

SeedResult run_seed(const model::TaskData& data, const model::ModelConfig& config,
                    const std::optional<std::filesystem::path>& out_dir) {
  SeedResult r;
  r.seed = static_cast<int>(config.seed);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto split = graph::split(data.labels(), config.train_fraction, config.seed);
    auto m = model::build_model(config, data.task(), data.n_features(), data.n_classes());
    const auto history = model::train(m, data, split);
    r.accuracy = 100.0 * model::evaluate(m, data, split);
    r.completeness = concepts::concept_evolution(m, data, split);
    r.gamma = m.gammas();
    r.eta = m.etas();
    if (out_dir) {
      std::filesystem::create_directories(*out_dir);
      const auto stem = data.name() + "_" + model::to_string(config.layer_kind) + "_seed" + std::to_string(config.seed);
      model::save_checkpoint(m, *out_dir / (stem + ".json"));
      write_text(*out_dir / (stem + "_history.csv"), history_csv(history));
    }
    r.ok = true;
  } catch (const model::TrainingDiverged& e) {
    r.error = e.what();
  } catch (const Error& e) {
    r.error = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    r.error = e.what();
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const Progress& progress) {
  spec.validate();
  const model::TaskData data = load_dataset(spec.dataset, spec.data_seed, spec.tu_dir);

  ExperimentReport report;
  report.dataset = spec.dataset;
  const std::size_t n_seeds = static_cast<std::size_t>(spec.n_seeds);
  for (auto kind : spec.kinds) {
    KindReport k;
    k.kind = kind;
    k.seeds.resize(n_seeds);
    report.kinds.push_back(std::move(k));
  }

  std::mutex progress_mu;
  parallel_for(spec.kinds.size() * n_seeds, spec.workers, [&](std::size_t task) {
    const std::size_t ki = task / n_seeds;
    const int seed = static_cast<int>(task % n_seeds);
    const auto cfg = spec.config(spec.kinds[ki], seed);
    SeedResult r = run_seed(data, cfg, spec.out_dir);
    if (progress) {
      std::lock_guard lock(progress_mu);
      std::string line = spec.dataset + " " + model::to_string(spec.kinds[ki]) + " seed " + std::to_string(seed) + ": ";
      line += r.ok ? "accuracy " + format_double(std::round(r.accuracy * 100) / 100) : "FAILED (" + r.error + ")";
      progress(line);
    }
    report.kinds[ki].seeds[static_cast<std::size_t>(seed)] = std::move(r);
  });
  for (auto& k : report.kinds) k.aggregate();
  return report;
}

std::string report_csv(std::span<const ExperimentReport> reports) {
  std::string out = csv_line(kReportHeader);
  for (const auto& rep : reports) {
    for (const auto& k : rep.kinds) {
      for (const auto& s : k.seeds) {
        out += csv_line({rep.dataset, model::to_string(k.kind), std::to_string(s.seed), s.ok ? "ok" : "failed",
                         s.error, format_double(s.accuracy), join(s.completeness), join(s.gamma), join(s.eta)});
      }
    }
  }
  return out;
}

std::vector<ExperimentReport> parse_report_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front() != kReportHeader) throw ParseError("report csv: missing or unexpected header");
  std::vector<ExperimentReport> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != kReportHeader.size()) {
      throw ParseError("report csv: row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) + " fields");
    }
    if (out.empty() || out.back().dataset != row[0]) out.push_back({row[0], {}});
    auto& rep = out.back();
    const auto kind = model::parse_layer_kind(row[1]);
    if (rep.kinds.empty() || rep.kinds.back().kind != kind) {
      KindReport k;
      k.kind = kind;
      rep.kinds.push_back(std::move(k));
    }
    SeedResult s;
    s.seed = static_cast<int>(parse_double(row[2]));
    if (row[3] != "ok" && row[3] != "failed") throw ParseError("report csv: bad status '" + row[3] + "'");
    s.ok = row[3] == "ok";
    s.error = row[4];
    s.accuracy = parse_double(row[5]);
    s.completeness = split_numbers(row[6]);
    s.gamma = split_numbers(row[7]);
    s.eta = split_numbers(row[8]);
    rep.kinds.back().seeds.push_back(std::move(s));
  }
  for (auto& rep : out) {
    for (auto& k : rep.kinds) k.aggregate();
  }
  return out;
}

nlohmann::json to_json(const ExperimentReport& report) {
  auto summary = [](const Summary& s) { return nlohmann::json{{"mean", s.mean}, {"ci_low", s.lo}, {"ci_high", s.hi}}; };
  auto nullable = [](const std::vector<double>& xs) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : xs) a.push_back(std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
    return a;
  };
  nlohmann::json kinds = nlohmann::json::array();
  for (const auto& k : report.kinds) {
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& s : k.seeds) {
      nlohmann::json js{{"seed", s.seed},
                        {"ok", s.ok},
                        {"completeness", s.completeness},
                        {"gamma", nullable(s.gamma)},
                        {"eta", nullable(s.eta)},
                        {"runtime_s", s.runtime_s}};
      js["accuracy"] = std::isnan(s.accuracy) ? nlohmann::json(nullptr) : nlohmann::json(s.accuracy);
      if (!s.ok) js["error"] = s.error;
      seeds.push_back(std::move(js));
    }
    nlohmann::json completeness = nlohmann::json::array();
    for (const auto& c : k.completeness) completeness.push_back(summary(c));
    kinds.push_back({{"kind", model::to_string(k.kind)},
                     {"seeds", seeds},
                     {"accuracy", k.accuracy ? summary(*k.accuracy) : nlohmann::json(nullptr)},
                     {"completeness", completeness},
                     {"gamma_mean", nullable(k.gamma_mean)},
                     {"eta_mean", nullable(k.eta_mean)},
                     {"failed", k.n_failed()}});
  }
  return {{"dataset", report.dataset}, {"kinds", kinds}};
}

std::string history_csv(const model::TrainHistory& history) {
  std::size_t layers = 0;
  for (const auto& e : history.entries) layers = std::max(layers, e.gamma.size());
  CsvRow header{"epoch", "task_loss", "reg_loss", "train_accuracy", "test_accuracy"};
  for (std::size_t l = 1; l <= layers; ++l) header.push_back("gamma_" + std::to_string(l));
  for (std::size_t l = 1; l <= layers; ++l) header.push_back("eta_" + std::to_string(l));
  std::string out = csv_line(header);
  for (const auto& e : history.entries) {
    CsvRow row{std::to_string(e.epoch), format_double(e.task_loss), format_double(e.reg_loss),
               format_double(e.train_accuracy), format_double(e.test_accuracy)};
    for (std::size_t l = 0; l < layers; ++l) row.push_back(format_double(l < e.gamma.size() ? e.gamma[l] : NAN));
    for (std::size_t l = 0; l < layers; ++l) row.push_back(format_double(l < e.eta.size() ? e.eta[l] : NAN));
    out += csv_line(row);
  }
  return out;
}

}  // namespace cgc::harness
