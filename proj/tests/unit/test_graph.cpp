#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "cgc/error.hpp"
#include "cgc/graph/generators.hpp"
#include "cgc/graph/json_io.hpp"
#include "cgc/graph/split.hpp"
#include "cgc/graph/tu_format.hpp"

using namespace cgc;
using namespace cgc::graph;
namespace fs = std::filesystem;

namespace {

// Symmetry of the directed view and absence of duplicate / self edges.
bool is_simple(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> seen;
  for (auto [u, v] : g.edges()) {
    if (u == v || u < 0 || static_cast<std::size_t>(std::max(u, v)) >= g.n_nodes()) return false;
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) return false;
  }
  const auto dir = g.directed_edges();
  if (dir.size() != 2 * g.n_edges()) return false;
  std::set<std::pair<NodeId, NodeId>> dset(dir.begin(), dir.end());
  return std::all_of(dir.begin(), dir.end(), [&](auto e) { return dset.count({e.second, e.first}) == 1; });
}

void check_simple(const Graph& g) {
  CHECK(is_simple(g));
  CHECK(g.features.rows() == g.n_nodes());
}

// Graph with the edges for which keep(u, v) is true.
template <class Keep>
Graph filtered(const Graph& g, Keep keep) {
  Graph out(g.n_nodes());
  for (auto [u, v] : g.edges())
    if (keep(u, v)) out.add_edge(u, v);
  return out;
}

std::vector<std::size_t> class_counts(const std::vector<std::int32_t>& labels) {
  std::vector<std::size_t> counts;
  for (auto l : labels) {
    if (static_cast<std::size_t>(l) >= counts.size()) counts.resize(l + 1, 0);
    ++counts[l];
  }
  return counts;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("cgc_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Copies the TOY fixture into dir/TOY so individual files can be broken.
fs::path copy_toy(const fs::path& dir) {
  const fs::path dst = dir / "TOY";
  fs::create_directories(dst);
  for (const auto& e : fs::directory_iterator(fs::path(CGC_FIXTURE_DIR) / "TOY"))
    fs::copy_file(e.path(), dst / e.path().filename());
  return dst;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("graph rejects self loops and duplicates") {
  Graph g(3);
  CHECK(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(1, 0));
  CHECK_FALSE(g.add_edge(2, 2));
  CHECK(g.has_edge(1, 0));
  CHECK(g.n_edges() == 1);
  CHECK(g.degrees() == std::vector<std::size_t>{1, 1, 0});
  CHECK(connected_components(g) == 2);
}

TEST_CASE("BA generator") {
  Rng rng(0);
  SUBCASE("boundary m = n - 1") {
    auto g = generate_ba(5, 4, rng);
    CHECK(g.n_nodes() == 5);
    CHECK(g.n_edges() == 10);
    CHECK(g.degrees()[4] == 4);
  }
  SUBCASE("edge count follows the attachment arithmetic") {
    auto g = generate_ba(300, 5, rng);
    CHECK(g.n_nodes() == 300);
    CHECK(g.n_edges() == 10 + 5 * 295);
    CHECK(is_connected(g));
  }
  SUBCASE("invalid m") {
    CHECK_THROWS_AS(generate_ba(5, 5, rng), ParameterError);
    CHECK_THROWS_AS(generate_ba(5, 0, rng), ParameterError);
  }
  SUBCASE("connected across seeds and sizes") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng r(seed);
      auto g = generate_ba(20 + seed * 7, 1 + seed % 4, r);
      CHECK(is_simple(g));
      CHECK(is_connected(g));
    }
  }
}

TEST_CASE("house template roles") {
  const auto& t = motif_template(Motif::kHouse);
  CHECK(t.n_nodes == 5);
  CHECK(t.edges.size() == 6);
  CHECK(t.roles == std::vector<std::int32_t>{2, 2, 3, 3, 1});
  // Apex joins both middle nodes.
  Graph h(5);
  for (auto [u, v] : t.edges) h.add_edge(u, v);
  CHECK(h.has_edge(4, 0));
  CHECK(h.has_edge(4, 1));
  CHECK(h.degrees() == std::vector<std::size_t>{3, 3, 2, 2, 2});
}

TEST_CASE("attach_motifs") {
  Rng rng(1);
  auto base = generate_ba(10, 2, rng);
  base.features = diff::Tensor::matrix(10, 1, 1.0);

  SUBCASE("one house on a 10-node base") {
    auto g = attach_motifs(base, Motif::kHouse, 1, rng, true);
    CHECK(g.n_nodes() == 15);
    CHECK(std::count(g.motif_mask.begin(), g.motif_mask.end(), 1) == 5);
    std::size_t internal = 0, bridges = 0;
    for (auto [u, v] : g.edges()) {
      if (g.motif_mask[u] && g.motif_mask[v]) ++internal;
      if (g.motif_mask[u] != g.motif_mask[v]) ++bridges;
    }
    CHECK(internal == 6);
    CHECK(bridges == 1);
    CHECK(g.node_labels[10 + 4] == 1);
    CHECK(std::count(g.node_labels.begin(), g.node_labels.end(), 0) == 10);
  }

  SUBCASE("grid count matches the BA-Grid size") {
    Rng r(2);
    auto b = generate_ba(300, 5, r);
    b.features = diff::Tensor::matrix(300, 1, 1.0);
    auto g = attach_motifs(b, Motif::kGrid3x3, 80, r, true);
    CHECK(g.n_nodes() == 1020);
  }

  SUBCASE("cycle degrees") {
    auto g = attach_motifs(base, Motif::kCycle6, 1, rng, true);
    const auto deg = g.degrees();
    std::size_t deg3 = 0;
    for (std::size_t v = 10; v < 16; ++v) {
      std::size_t inside = 0;
      for (auto [a, b] : g.edges())
        if ((a == static_cast<NodeId>(v) && b >= 10) || (b == static_cast<NodeId>(v) && a >= 10)) ++inside;
      CHECK(inside == 2);
      if (deg[v] == 3) ++deg3;
    }
    CHECK(deg3 == 1);
  }

  SUBCASE("removing bridges isolates each motif copy") {
    for (auto motif : {Motif::kHouse, Motif::kGrid3x3, Motif::kCycle6, Motif::kStar}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng r(seed);
        auto g = attach_motifs(base, motif, 4, r, false);
        CHECK(is_simple(g));
        CHECK(is_connected(g));
        auto cut = filtered(g, [&](NodeId u, NodeId v) { return g.motif_mask[u] == g.motif_mask[v]; });
        CHECK(connected_components(cut) == 1 + 4);
      }
    }
  }
}

TEST_CASE("node datasets match their published sizes") {
  struct Expect {
    NodeDatasetKind kind;
    std::size_t nodes, features, classes;
  };
  for (auto e : {Expect{NodeDatasetKind::kBaShapes, 700, 1, 4}, Expect{NodeDatasetKind::kBaCommunity, 1400, 1, 8},
                 Expect{NodeDatasetKind::kBaGrid, 1020, 1, 2}, Expect{NodeDatasetKind::kTreeCycles, 871, 1, 2},
                 Expect{NodeDatasetKind::kTreeGrid, 1231, 1, 2}}) {
    CAPTURE(to_string(e.kind));
    const auto g = build_node_dataset(e.kind, 0);
    CHECK(g.n_nodes() == e.nodes);
    CHECK(g.features.cols() == e.features);
    CHECK(class_counts(g.node_labels).size() == e.classes);
    CHECK(g.motif_mask.size() == e.nodes);
    check_simple(g);
    g.validate();
  }
}

TEST_CASE("BA-Shapes holds 80 houses and 70 extra edges") {
  const auto g = build_node_dataset(NodeDatasetKind::kBaShapes, 0);
  const auto counts = class_counts(g.node_labels);
  CHECK(counts == std::vector<std::size_t>{300, 80, 160, 160});
  CHECK(g.n_edges() == 1485 + 80 * 6 + 80 + 70);
  CHECK(std::all_of(g.features.values().begin(), g.features.values().end(), [](double x) { return x == 1.0; }));
}

TEST_CASE("generator outputs are simple graphs across seeds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto kind : {NodeDatasetKind::kBaShapes, NodeDatasetKind::kBaCommunity, NodeDatasetKind::kTreeCycles}) {
      CAPTURE(seed);
      check_simple(build_node_dataset(kind, seed));
    }
    const auto set = build_graph_dataset(GraphDatasetKind::kHouseColour, seed);
    CHECK(std::all_of(set.graphs.begin(), set.graphs.end(), is_simple));
  }
}

TEST_CASE("generators are pure functions of the seed") {
  CHECK(to_json(build_node_dataset(NodeDatasetKind::kBaShapes, 3)).dump() ==
        to_json(build_node_dataset(NodeDatasetKind::kBaShapes, 3)).dump());
  CHECK(to_json(build_graph_dataset(GraphDatasetKind::kStars, 3)).dump() ==
        to_json(build_graph_dataset(GraphDatasetKind::kStars, 3)).dump());
  CHECK(to_json(build_node_dataset(NodeDatasetKind::kBaShapes, 3)).dump() !=
        to_json(build_node_dataset(NodeDatasetKind::kBaShapes, 4)).dump());
}

TEST_CASE("graph datasets match their published sizes") {
  struct Expect {
    GraphDatasetKind kind;
    std::size_t graphs, features, classes;
  };
  for (auto e : {Expect{GraphDatasetKind::kGrid, 2000, 1, 2}, Expect{GraphDatasetKind::kGridHouse, 1000, 1, 2},
                 Expect{GraphDatasetKind::kStars, 1500, 1, 3}, Expect{GraphDatasetKind::kHouseColour, 1000, 3, 2}}) {
    CAPTURE(to_string(e.kind));
    const auto set = build_graph_dataset(e.kind, 0);
    CHECK(set.size() == e.graphs);
    CHECK(set.n_features() == e.features);
    CHECK(set.n_classes() == e.classes);
    set.validate();
  }
  const auto grid = build_graph_dataset(GraphDatasetKind::kGrid, 0);
  CHECK(class_counts(grid.graph_labels) == std::vector<std::size_t>{1000, 1000});
}

TEST_CASE("STARS mean graph size is near 63.9") {
  const auto set = build_graph_dataset(GraphDatasetKind::kStars, 0);
  CHECK(set.mean_graph_size() == doctest::Approx(63.92).epsilon(0.10));
  CHECK(std::all_of(set.graphs.begin(), set.graphs.end(), [](const Graph& g) { return is_connected(g); }));
}

TEST_CASE("house colour features are one-hot") {
  const auto set = build_graph_dataset(GraphDatasetKind::kHouseColour, 0);
  bool one_hot = true;
  for (const auto& g : set.graphs) {
    for (std::size_t v = 0; v < g.n_nodes(); ++v) {
      double row = 0;
      for (std::size_t c = 0; c < 3; ++c) row += g.features(v, c);
      one_hot = one_hot && row == 1.0;
    }
  }
  CHECK(one_hot);
}

TEST_CASE("stratified split") {
  SUBCASE("10 items") {
    std::vector<std::int32_t> labels(10, 0);
    auto s = split(labels, 0.8, 7);
    CHECK(s.train_idx.size() == 8);
    CHECK(s.test_idx.size() == 2);
    std::vector<std::int32_t> all = s.train_idx;
    all.insert(all.end(), s.test_idx.begin(), s.test_idx.end());
    std::sort(all.begin(), all.end());
    std::vector<std::int32_t> expect(10);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(all == expect);
  }
  SUBCASE("balanced 100") {
    std::vector<std::int32_t> labels(100);
    for (std::size_t i = 0; i < 100; ++i) labels[i] = static_cast<std::int32_t>(i % 2);
    auto s = split(labels, 0.8, 3);
    std::size_t train0 = 0, test0 = 0;
    for (auto i : s.train_idx) train0 += labels[i] == 0;
    for (auto i : s.test_idx) test0 += labels[i] == 0;
    CHECK(train0 == 40);
    CHECK(s.train_idx.size() - train0 == 40);
    CHECK(test0 == 10);
    CHECK(s.test_idx.size() - test0 == 10);
    CHECK_FALSE(s.unstratified);
  }
  SUBCASE("deterministic per seed") {
    std::vector<std::int32_t> labels(50);
    for (std::size_t i = 0; i < 50; ++i) labels[i] = static_cast<std::int32_t>(i % 3);
    CHECK(split(labels, 0.8, 5).train_idx == split(labels, 0.8, 5).train_idx);
    CHECK(split(labels, 0.8, 5).train_idx != split(labels, 0.8, 6).train_idx);
  }
  SUBCASE("singleton class falls back to unstratified") {
    std::vector<std::int32_t> labels{0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
    auto s = split(labels, 0.8, 1);
    CHECK(s.unstratified);
    CHECK(s.train_idx.size() + s.test_idx.size() == 10);
  }
  SUBCASE("bad fraction") {
    std::vector<std::int32_t> labels(4, 0);
    CHECK_THROWS_AS(split(labels, 1.0, 0), ParameterError);
    CHECK_THROWS_AS(split(labels, 0.0, 0), ParameterError);
  }
}

TEST_CASE("TU toy fixture") {
  const auto set = load_tu(fs::path(CGC_FIXTURE_DIR) / "TOY");
  REQUIRE(set.size() == 2);
  CHECK(set.name == "TOY");
  CHECK(set.graph_labels == std::vector<std::int32_t>{0, 1});
  CHECK(set.n_features() == 3);
  const auto& a = set.graphs[0];
  const auto& b = set.graphs[1];
  CHECK(a.n_nodes() == 3);
  CHECK(a.n_edges() == 3);
  CHECK(a.has_edge(0, 1));
  CHECK(a.has_edge(1, 2));
  CHECK(a.has_edge(0, 2));
  CHECK(b.n_nodes() == 2);
  CHECK(b.n_edges() == 1);
  CHECK(b.has_edge(0, 1));
  // Labels {0, 2, 0 | 1, 2} map to columns {0, 2, 0 | 1, 2}.
  CHECK(a.features(0, 0) == 1.0);
  CHECK(a.features(1, 2) == 1.0);
  CHECK(a.features(2, 0) == 1.0);
  CHECK(b.features(0, 1) == 1.0);
  CHECK(b.features(1, 2) == 1.0);
  CHECK(b.features(1, 0) == 0.0);
}

TEST_CASE("TU save/load round trip") {
  TempDir tmp("tu_roundtrip");
  const auto set = load_tu(fs::path(CGC_FIXTURE_DIR) / "TOY");
  save_tu(set, tmp.path);
  const auto again = load_tu(tmp.path / "TOY");
  CHECK(to_json(again).dump() == to_json(set).dump());

  auto stars = build_graph_dataset(GraphDatasetKind::kStars, 1);
  stars.graphs.resize(20);
  stars.graph_labels.resize(20);
  std::vector<std::int32_t> present = stars.graph_labels;
  save_tu(stars, tmp.path);
  const auto back = load_tu(tmp.path / stars.name);
  REQUIRE(back.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(back.graphs[i].edges() == stars.graphs[i].edges());
    CHECK(back.graphs[i].features.cols() == 1);
  }
}

TEST_CASE("TU errors") {
  TempDir tmp("tu_errors");
  SUBCASE("missing file names the file") {
    const auto dir = copy_toy(tmp.path);
    fs::remove(dir / "TOY_graph_indicator.txt");
    try {
      load_tu(dir);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("TOY_graph_indicator.txt") != std::string::npos);
    }
  }
  SUBCASE("bad token reports the line") {
    const auto dir = copy_toy(tmp.path);
    write_file(dir / "TOY_A.txt", "1, 2\n2, x\n");
    try {
      load_tu(dir);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("comment lines are rejected") {
    const auto dir = copy_toy(tmp.path);
    write_file(dir / "TOY_graph_labels.txt", "# labels\n-1\n1\n");
    CHECK_THROWS_AS(load_tu(dir), ParseError);
  }
  SUBCASE("edge crossing graphs") {
    const auto dir = copy_toy(tmp.path);
    write_file(dir / "TOY_A.txt", "1, 2\n3, 4\n");
    CHECK_THROWS_AS(load_tu(dir), ValidationError);
  }
  SUBCASE("whitespace tolerated") {
    const auto dir = copy_toy(tmp.path);
    write_file(dir / "TOY_A.txt", "  1,2  \n\n4 ,  5\n");
    const auto set = load_tu(dir);
    CHECK(set.graphs[0].n_edges() == 1);
    CHECK(set.graphs[1].n_edges() == 1);
  }
  SUBCASE("no node labels gives constant features") {
    const auto dir = copy_toy(tmp.path);
    fs::remove(dir / "TOY_node_labels.txt");
    const auto set = load_tu(dir);
    CHECK(set.n_features() == 1);
    CHECK(set.graphs[1].features(1, 0) == 1.0);
  }
}

TEST_CASE("JSON graph schema round trip") {
  const auto g = build_node_dataset(NodeDatasetKind::kBaShapes, 2);
  const auto j = to_json(g);
  CHECK(j.at("n_nodes") == 700);
  CHECK(j.at("edges").size() == g.n_edges());
  const auto back = graph_from_json(j);
  CHECK(back.edges() == g.edges());
  CHECK(back.node_labels == g.node_labels);
  CHECK(back.motif_mask == g.motif_mask);
  CHECK(to_json(back) == j);

  const auto set = build_graph_dataset(GraphDatasetKind::kHouseColour, 0);
  const auto sj = to_json(set);
  CHECK(to_json(graph_set_from_json(sj)) == sj);
  CHECK_THROWS(graph_from_json(nlohmann::json{{"n_nodes", 2}, {"edges", {{0, 5}}}}));
}
