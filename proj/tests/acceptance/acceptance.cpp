// End-to-end acceptance run: one PASS/FAIL line per criterion, exit code 1
// if any selected criterion fails. The training criteria take tens of
// minutes on one core; use --only to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgc/conv/layers.hpp"
#include "cgc/diff/gradcheck.hpp"
#include "cgc/graph/json_io.hpp"
#include "cgc/graph/tu_format.hpp"
#include "cgc/harness/csv.hpp"
#include "cgc/harness/experiment.hpp"
#include "cgc/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace cgc;
using model::LayerKind;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string fmt_sci(double v) {
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Shared training runs. Criteria 1/4 and 2/6 read the same experiments.

struct RunKey {
  std::string dataset;
  std::vector<LayerKind> kinds;
  harness::Overrides overrides;
  auto operator<=>(const RunKey&) const = default;
};

class Runs {
 public:
  explicit Runs(std::size_t workers) : workers_(workers) {}

  const harness::ExperimentReport& get(const std::string& dataset, std::vector<LayerKind> kinds,
                                       harness::Overrides overrides = {}) {
    RunKey key{dataset, kinds, overrides};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    harness::ExperimentSpec spec;
    spec.dataset = dataset;
    spec.kinds = std::move(kinds);
    spec.n_seeds = 5;
    spec.overrides = std::move(overrides);
    spec.workers = workers_;
    return cache_.emplace(key, harness::run_experiment(spec)).first->second;
  }

 private:
  std::size_t workers_;
  std::map<RunKey, harness::ExperimentReport> cache_;
};

std::string seed_list(const harness::KindReport& k) {
  std::string s;
  for (const auto& r : k.seeds) {
    if (!s.empty()) s += "/";
    s += r.ok ? fmt(r.accuracy, 1) : "failed";
  }
  return s;
}

std::string accuracy_text(const harness::KindReport& k) {
  std::string s = model::to_string(k.kind) + " ";
  if (!k.accuracy) return s + "all seeds failed";
  s += fmt(k.accuracy->mean) + " [" + fmt(k.accuracy->lo) + ", " + fmt(k.accuracy->hi) + "]";
  s += " (" + seed_list(k) + ")";
  return s;
}

bool all_seeds_ok(const harness::KindReport& k) { return k.n_failed() == 0 && k.accuracy; }

// ---------------------------------------------------------------------------
// Small-graph fixtures for the layer-level criteria.

graph::Graph random_graph(std::size_t n, std::size_t extra, std::mt19937_64& rng, std::size_t n_features) {
  graph::Graph g(n);
  for (std::size_t v = 1; v < n; ++v)
    g.add_edge(static_cast<int>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng)), static_cast<int>(v));
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t k = 0; k < extra; ++k) g.add_edge(static_cast<int>(any(rng)), static_cast<int>(any(rng)));
  std::normal_distribution<double> normal;
  g.features = diff::Tensor::matrix(n, n_features);
  for (auto& v : g.features.values()) v = normal(rng);
  return g;
}

diff::Tensor random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  auto t = diff::Tensor::matrix(r, c);
  for (auto& v : t.values()) v = normal(rng);
  return t;
}

diff::Tensor random_q(std::size_t n, std::size_t c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  auto q = diff::Tensor::matrix(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < c; ++j) s += (q(i, j) = u(rng));
    for (std::size_t j = 0; j < c; ++j) q(i, j) /= s;
  }
  return q;
}

diff::Tensor bias_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return diff::Tensor::vector(std::move(v));
}

double max_abs_diff(const diff::Tensor& a, const diff::Tensor& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool bitwise_equal(const diff::Tensor& a, const diff::Tensor& b) {
  if (a.shape() != b.shape()) return false;
  return std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Criteria.

Outcome criterion_1(Runs& runs) {
  const auto& k = runs.get("ba_shapes", {LayerKind::kCgc, LayerKind::kGat}).at(LayerKind::kCgc);
  const bool pass = all_seeds_ok(k) && k.accuracy->mean >= 95.0;
  return {pass, "BA-Shapes " + accuracy_text(k) + "; need mean >= 95.0"};
}

Outcome criterion_2(Runs& runs) {
  const auto& rep = runs.get("ba_grid", {LayerKind::kCgc, LayerKind::kPureCgc});
  const auto& c = rep.at(LayerKind::kCgc);
  const auto& p = rep.at(LayerKind::kPureCgc);
  const bool acc_ok = all_seeds_ok(c) && all_seeds_ok(p) && c.accuracy->mean >= 98.0 && p.accuracy->mean >= 98.0;
  const double comp = p.completeness.empty() ? NAN : p.completeness.back().mean;
  const bool comp_ok = !p.completeness.empty() && comp >= 99.0;
  return {acc_ok && comp_ok, "BA-Grid " + accuracy_text(c) + "; " + accuracy_text(p) +
                                 "; pure_cgc final-layer completeness " + fmt(comp) +
                                 "; need accuracy >= 98.0 and completeness >= 99.0"};
}

Outcome criterion_3(Runs& runs) {
  const auto& s = runs.get("stars", {LayerKind::kCgc}).at(LayerKind::kCgc);
  const auto& g = runs.get("grid", {LayerKind::kCgc}).at(LayerKind::kCgc);
  const bool pass = all_seeds_ok(s) && all_seeds_ok(g) && s.accuracy->mean >= 96.0 && g.accuracy->mean >= 95.0;
  return {pass, "STARS " + accuracy_text(s) + " need >= 96.0; Grid " + accuracy_text(g) + " need >= 95.0"};
}

Outcome criterion_4(Runs& runs) {
  const auto& rep = runs.get("ba_shapes", {LayerKind::kCgc, LayerKind::kGat});
  const auto& c = rep.at(LayerKind::kCgc);
  const auto& a = rep.at(LayerKind::kGat);
  if (!all_seeds_ok(c) || !all_seeds_ok(a)) return {false, "failed seeds: " + accuracy_text(c) + "; " + accuracy_text(a)};
  const double gap = c.accuracy->mean - a.accuracy->mean;
  return {gap >= 20.0, "BA-Shapes cgc - gat = " + fmt(c.accuracy->mean) + " - " + fmt(a.accuracy->mean) + " = " +
                           fmt(gap) + " points; need >= 20"};
}

inline constexpr int kGridHouseEpochs = 20;
inline constexpr int kTreeGridEpochs = 3000;

Outcome criterion_5(Runs& runs) {
  const auto& rep =
      runs.get("grid_house", harness::all_layer_kinds(), {{"epochs", std::to_string(kGridHouseEpochs)}});
  bool pass = true;
  std::string detail = "Grid-House, " + std::to_string(kGridHouseEpochs) + " epochs (reduced from 2000):";
  for (const auto& k : rep.kinds) {
    pass = pass && all_seeds_ok(k) && k.accuracy->mean <= 70.0;
    detail += " " + accuracy_text(k) + ";";
  }
  return {pass, detail + " need every mean <= 70.0"};
}

// Seeds whose final-layer completeness is at least the first layer's.
std::pair<int, std::string> rising_seeds(const harness::KindReport& k) {
  int n = 0;
  std::string s;
  for (const auto& r : k.seeds) {
    if (!s.empty()) s += " ";
    if (!r.ok || r.completeness.empty()) {
      s += "failed";
      continue;
    }
    const bool up = r.completeness.back() >= r.completeness.front();
    n += up;
    s += fmt(r.completeness.front(), 1) + "->" + fmt(r.completeness.back(), 1);
  }
  return {n, s};
}

Outcome criterion_6(Runs& runs) {
  const auto& bg = runs.get("ba_grid", {LayerKind::kCgc, LayerKind::kPureCgc}).at(LayerKind::kCgc);
  const auto& tg =
      runs.get("tree_grid", {LayerKind::kCgc}, {{"epochs", std::to_string(kTreeGridEpochs)}}).at(LayerKind::kCgc);
  const auto [nb, sb] = rising_seeds(bg);
  const auto [nt, st] = rising_seeds(tg);
  return {nb >= 4 && nt >= 4, "first->final layer completeness, BA-Grid cgc " + std::to_string(nb) + "/5 (" + sb +
                                  "); Tree-Grid cgc, " + std::to_string(kTreeGridEpochs) +
                                  " epochs (reduced from 20000), " + std::to_string(nt) + "/5 (" + st +
                                  "); need >= 4/5 each"};
}

Outcome criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7007);
  double worst_a = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial);
    const auto g = random_graph(n, n / 2, rng, 5);
    const auto e = conv::structural_weights(g);
    auto cgc = conv::CgcParams::init(5, 4, rng, "c");
    cgc.bias.value = bias_vector(4, rng);
    auto gcn = conv::GcnParams::init(5, 4, rng, "g");
    gcn.weight.value = cgc.weight.value;
    gcn.bias.value = cgc.bias.value;
    conv::ForwardOptions pinned;
    pinned.mix.gamma = 0.0;
    pinned.mix.eta = 0.0;
    diff::Tape t;
    auto u = t.constant(g.features);
    const auto z_cgc = conv::cgc_forward(u, t.constant(random_q(n, 5, rng)), cgc, e, {}, pinned).z.value();
    const auto z_gcn = conv::gcn_forward(u, gcn, e).value();
    worst_a = std::max(worst_a, max_abs_diff(z_cgc, z_gcn));
  }

  bool exact_b = true;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial);
    const auto g = random_graph(n, n / 2, rng, 4);
    const auto e = conv::structural_weights(g);
    auto cgc = conv::CgcParams::init(4, 4, rng, "c");
    cgc.bias.value = bias_vector(4, rng);
    cgc.gamma_raw.value = diff::Tensor::scalar(std::normal_distribution<double>()(rng));
    conv::ForwardOptions eta_one;
    eta_one.mix.eta = 1.0;
    diff::Tape t;
    auto q = t.constant(random_q(n, 4, rng));
    const auto relaxed = conv::cgc_forward(t.constant(g.features), q, cgc, e, {}, eta_one);
    const auto pure = conv::pure_cgc_forward(q, cgc, e, {});
    const diff::Tensor zr = relaxed.z.value(), qr = relaxed.q.value();
    exact_b = exact_b && bitwise_equal(zr, pure.z.value()) && bitwise_equal(qr, pure.q.value());
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_a < 1e-9 && exact_b && secs < 1.0;
  return {pass, "(a) cgc(gamma=0, eta=0) vs gcn max abs diff " + fmt_sci(worst_a) + " over 20 graphs (need < 1e-9); " +
                    "(b) pure_cgc vs cgc(eta=1) " + (exact_b ? "bit-identical" : "DIFFERENT") + " over 20 graphs; " +
                    fmt(secs, 3) + " s (need < 1 s)"};
}

// sum(x @ w) for a fixed random column w, a generic scalar read-out.
diff::Var probe(diff::Var x, const diff::Tensor& w) {
  return diff::sum(diff::matmul(x, x.tape()->constant(w)));
}

Outcome criterion_8() {
  const auto t0 = std::chrono::steady_clock::now();
  std::map<std::string, double> worst{{"cgc", 0}, {"pure_cgc", 0}, {"gat", 0}, {"reg_gamma", 0}, {"reg_eta", 0}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed + 800);
    const auto g = random_graph(6, 3, rng, 3);
    const auto e = conv::structural_weights(g);
    const auto u = g.features;
    const auto q = random_q(6, 3, rng);
    const auto w = random_matrix(3, 1, rng);
    conv::RegConfig reg;
    reg.lambda_a = 0.3;
    reg.lambda_b = 0.7;

    auto cgc = conv::CgcParams::init(3, 3, rng, "c");
    cgc.gamma_raw.value = diff::Tensor::scalar(std::normal_distribution<double>()(rng));
    cgc.eta_raw.value = diff::Tensor::scalar(std::normal_distribution<double>()(rng));
    cgc.bias.value = bias_vector(3, rng);
    diff::Parameter* all[] = {&cgc.weight, &cgc.att, &cgc.bias, &cgc.gamma_raw, &cgc.eta_raw};
    auto keep = [&](const std::string& name, double err) { worst[name] = std::max(worst[name], err); };

    keep("cgc", diff::grad_check(
                    [&](diff::Tape& t) {
                      auto o = conv::cgc_forward(t.constant(u), t.constant(q), cgc, e, reg);
                      return diff::add(diff::add(probe(o.q, w), probe(o.z, w)), o.reg_loss);
                    },
                    all));
    diff::Parameter* pure_params[] = {&cgc.weight, &cgc.att, &cgc.bias, &cgc.gamma_raw};
    keep("pure_cgc", diff::grad_check(
                         [&](diff::Tape& t) {
                           auto o = conv::pure_cgc_forward(t.constant(q), cgc, e, reg);
                           return diff::add(diff::add(probe(o.q, w), probe(o.z, w)), o.reg_loss);
                         },
                         pure_params));

    // Each regulariser on its own: the other weight set to zero.
    conv::RegConfig only_a = reg, only_b = reg;
    only_a.lambda_b = 0;
    only_b.lambda_a = 0;
    diff::Parameter* gamma_p[] = {&cgc.gamma_raw};
    diff::Parameter* eta_p[] = {&cgc.eta_raw};
    keep("reg_gamma", diff::grad_check(
                          [&](diff::Tape& t) {
                            return conv::cgc_forward(t.constant(u), t.constant(q), cgc, e, only_a).reg_loss;
                          },
                          gamma_p));
    keep("reg_eta", diff::grad_check(
                        [&](diff::Tape& t) {
                          return conv::cgc_forward(t.constant(u), t.constant(q), cgc, e, only_b).reg_loss;
                        },
                        eta_p));

    auto gat = conv::GatParams::init(3, 3, rng, "a");
    gat.bias.value = bias_vector(3, rng);
    diff::Parameter* gp[] = {&gat.weight, &gat.att, &gat.bias};
    keep("gat", diff::grad_check([&](diff::Tape& t) { return probe(conv::gat_forward(t.constant(u), gat, e).z, w); },
                                 gp));
  }
  const double secs = seconds_since(t0);
  bool pass = secs < 30.0;
  std::string detail = "max relative error over 10 seeds:";
  for (const auto& [name, err] : worst) {
    pass = pass && err < 1e-4;
    detail += " " + name + " " + fmt_sci(err);
  }
  return {pass, detail + " (need < 1e-4); " + fmt(secs, 2) + " s (need < 30 s)"};
}

Outcome criterion_9() {
  auto weight = [](const conv::EdgeIndex& e, int s, int d) {
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e.src[k] == s && e.dst[k] == d) return e.structural[k];
    return std::nan("");
  };
  bool exact = true;
  graph::Graph k3(3);
  k3.add_edge(0, 1);
  k3.add_edge(1, 2);
  k3.add_edge(0, 2);
  const auto ek = conv::structural_weights(k3);
  exact = exact && ek.size() == 9;
  for (double w : ek.structural) exact = exact && w == 1.0 / 3.0;

  // Path 0-1-2 with self-loops: degrees 2, 3, 2.
  graph::Graph p3(3);
  p3.add_edge(0, 1);
  p3.add_edge(1, 2);
  const auto ep = conv::structural_weights(p3);
  exact = exact && ep.size() == 7;
  exact = exact && weight(ep, 0, 0) == 0.5 && weight(ep, 2, 2) == 0.5;
  exact = exact && weight(ep, 0, 1) == 1.0 / std::sqrt(6.0) && weight(ep, 1, 0) == 1.0 / std::sqrt(6.0);
  exact = exact && weight(ep, 2, 1) == 1.0 / std::sqrt(6.0) && weight(ep, 1, 2) == 1.0 / std::sqrt(6.0);
  exact = exact && std::abs(weight(ep, 1, 1) - 1.0 / 3.0) <= 1e-15;

  const auto ei = conv::structural_weights(graph::Graph(1));
  exact = exact && ei.size() == 1 && ei.structural[0] == 1.0;

  std::mt19937_64 rng(909);
  std::normal_distribution<double> normal(0, 3);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 20);
    const std::size_t c = 2 + static_cast<std::size_t>(trial % 4);
    const auto g = random_graph(n, static_cast<std::size_t>(trial % 9), rng, 1);
    const auto e = conv::structural_weights(g);
    auto a = diff::Tensor::vector(std::vector<double>(2 * c));
    for (auto& v : a.values()) v = normal(rng);
    diff::Tape t;
    const diff::Tensor alpha = conv::concept_attention(t.constant(random_q(n, c, rng)), t.constant(a), e).value();
    std::vector<double> sums(n, 0.0);
    for (std::size_t k = 0; k < e.size(); ++k) sums[e.dst[k]] += alpha[k];
    for (double s : sums) worst = std::max(worst, std::abs(s - 1));
  }
  return {exact && worst <= 1e-9, std::string("structural weights on K3, path-3, isolated node ") +
                                      (exact ? "exact" : "MISMATCH") +
                                      "; attention per-destination sum max |s-1| = " + fmt_sci(worst) +
                                      " over 1000 random graphs (need <= 1e-9)"};
}

Outcome criterion_10(const fs::path& fixtures, const fs::path& work) {
  struct Row {
    const char* name;
    std::size_t items, features, classes;
  };
  const Row table[] = {{"ba_shapes", 700, 1, 4},  {"ba_community", 1400, 1, 8}, {"ba_grid", 1020, 1, 2},
                       {"tree_cycles", 871, 1, 2}, {"tree_grid", 1231, 1, 2},    {"grid", 2000, 1, 2},
                       {"grid_house", 1000, 1, 2}, {"stars", 1500, 1, 3},        {"house_colour", 1000, 3, 2}};
  bool pass = true;
  std::string bad;
  for (const auto& row : table) {
    const auto data = harness::load_dataset(row.name);
    const std::set<std::int32_t> distinct(data.labels().begin(), data.labels().end());
    const bool ok = data.n_items() == row.items && data.n_features() == row.features &&
                    data.n_classes() == row.classes && distinct.size() == row.classes;
    if (!ok)
      bad += std::string(" ") + row.name + " got " + std::to_string(data.n_items()) + "/" +
             std::to_string(data.n_features()) + "/" + std::to_string(distinct.size());
    pass = pass && ok;
  }

  // TU toy: load -> save -> load is the identity, and a second save is byte-identical.
  const auto toy = graph::load_tu(fixtures / "TOY");
  bool toy_ok = toy.size() == 2 && toy.graphs[0].n_edges() == 3 && toy.graphs[1].n_edges() == 1 &&
                toy.graph_labels == std::vector<std::int32_t>{0, 1} && toy.n_features() == 3;
  const auto d1 = work / "tu1", d2 = work / "tu2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  graph::save_tu(toy, d1);
  const auto back = graph::load_tu(d1 / toy.name);
  graph::save_tu(back, d2);
  toy_ok = toy_ok && graph::to_json(back).dump() == graph::to_json(toy).dump();
  for (const auto& f : fs::directory_iterator(d1 / toy.name))
    toy_ok = toy_ok && harness::read_text(f.path()) == harness::read_text(d2 / toy.name / f.path().filename());
  pass = pass && toy_ok;
  return {pass, "9 synthetic datasets vs published items/features/classes: " + (bad.empty() ? "all match" : "MISMATCH" + bad) +
                    "; TU toy round trip " + (toy_ok ? "exact" : "DIFFERS")};
}

Outcome criterion_11(const fs::path& cli, const fs::path& work) {
  const std::string datasets = "ba_shapes ba_community ba_grid tree_cycles tree_grid grid grid_house stars house_colour";
  std::vector<std::string> names{"accuracy.csv", "completeness.csv", "seeds.csv"};
  fs::path dirs[2] = {work / "reproduce_a", work / "reproduce_b"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    const std::string cmd = "\"" + cli.string() + "\" -q --epochs 2 --out \"" + d.string() +
                            "\" reproduce --seeds 2 --datasets " + datasets + " > \"" + d.string() + ".log\"";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) return {false, "`" + cmd + "` exited with status " + std::to_string(rc)};
  }
  bool same = true;
  std::size_t bytes = 0;
  for (const auto& n : names) {
    const auto a = harness::read_text(dirs[0] / n);
    const auto b = harness::read_text(dirs[1] / n);
    same = same && a == b && !a.empty();
    bytes += a.size();
  }
  return {same, "cgc reproduce (9 synthetic datasets x 4 kinds x 2 seeds, 2 epochs) twice: accuracy.csv, "
                "completeness.csv, seeds.csv " +
                    std::string(same ? "byte-identical" : "DIFFER") + " (" + std::to_string(bytes) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::string cli_path = CGC_CLI_PATH;
  std::string fixtures = CGC_FIXTURE_DIR;
  std::string work = (fs::temp_directory_path() / "cgc_acceptance").string();
  std::size_t workers = 0;
  app.add_option("--only", only, "Criteria to run (default: all)")->check(CLI::Range(1, 11));
  app.add_option("--cli", cli_path, "Path to the cgc executable")->capture_default_str();
  app.add_option("--fixtures", fixtures, "Test fixture directory")->capture_default_str();
  app.add_option("--work", work, "Scratch directory")->capture_default_str();
  app.add_option("--workers", workers, "Worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(work);
  Runs runs(workers);
  const std::map<int, std::function<Outcome()>> criteria{
      {1, [&] { return criterion_1(runs); }},
      {2, [&] { return criterion_2(runs); }},
      {3, [&] { return criterion_3(runs); }},
      {4, [&] { return criterion_4(runs); }},
      {5, [&] { return criterion_5(runs); }},
      {6, [&] { return criterion_6(runs); }},
      {7, [] { return criterion_7(); }},
      {8, [] { return criterion_8(); }},
      {9, [] { return criterion_9(); }},
      {10, [&] { return criterion_10(fixtures, work); }},
      {11, [&] { return criterion_11(cli_path, work); }},
  };
  const std::set<int> selected(only.begin(), only.end());

  std::cout << "kernels: " << simd::isa_name(simd::active().isa) << std::endl;
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  ["
              << fmt(seconds_since(t0), 1) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
