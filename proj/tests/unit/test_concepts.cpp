#include <doctest.h>

#include <algorithm>
#include <random>

#include "cgc/concepts/concepts.hpp"
#include "cgc/concepts/neighborhood.hpp"
#include "cgc/concepts/tree.hpp"
#include "cgc/error.hpp"
#include "cgc/graph/generators.hpp"
#include "cgc/graph/split.hpp"
#include "cgc/model/model.hpp"
#include "helpers.hpp"

using namespace cgc;
using namespace cgc::concepts;
using diff::Tensor;

namespace {

double train_accuracy(const DecisionTree& tree, const Tensor& x, const std::vector<std::int32_t>& y) {
  const auto pred = tree.predict(x);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hits += pred[i] == y[i];
  return static_cast<double>(hits) / static_cast<double>(y.size());
}

// Alternating blocks of four: every label pattern with period 2 or 4 lands on both sides.
graph::SplitSpec blocks(std::size_t n) {
  graph::SplitSpec s;
  for (std::size_t i = 0; i < n; ++i) ((i / 4) % 2 == 0 ? s.train_idx : s.test_idx).push_back(static_cast<std::int32_t>(i));
  return s;
}

}  // namespace

TEST_CASE("binarize") {
  SUBCASE("threshold and tie rule") {
    auto b = binarize(Tensor::from_rows({{0.7, 0.2, 0.1}}));
    CHECK(b.encodings[0].binary == Bits{1, 0, 0});
    auto tie = binarize(Tensor::from_rows({{0.5, 0.5}}));
    CHECK(tie.encodings[0].binary == Bits{1, 1});
  }
  SUBCASE("uniform rows are one all-zero concept") {
    auto b = binarize(Tensor::matrix(6, 4, 0.25));
    CHECK(b.table.size() == 1);
    CHECK(b.table.bits(0) == Bits{0, 0, 0, 0});
    CHECK(b.table.count(0) == 6);
  }
  SUBCASE("ids follow first appearance") {
    auto b = binarize(Tensor::from_rows({{0.1, 0.9}, {0.8, 0.2}, {0.2, 0.8}, {0.9, 0.1}}));
    CHECK(b.ids() == std::vector<int>{0, 1, 0, 1});
    CHECK(b.table.bits(0) == Bits{0, 1});
    CHECK(b.table.total() == 4);
    CHECK(b.table.find(Bits{1, 1}) == std::nullopt);
    CHECK(b.encodings[2].fuzzy == std::vector<double>{0.2, 0.8});
  }
  SUBCASE("idempotent and stable") {
    std::mt19937_64 rng(3);
    auto q = testutil::random_matrix(40, 5, rng, 0.4);
    for (auto& v : q.values()) v = std::abs(v);
    auto once = binarize(q);
    auto twice = binarize(once.bit_matrix());
    CHECK(twice.ids() == once.ids());
    for (std::size_t i = 0; i < 40; ++i) CHECK(twice.encodings[i].binary == once.encodings[i].binary);
    CHECK(binarize(q).ids() == once.ids());
  }
}

TEST_CASE("decision tree") {
  SUBCASE("threshold-separable feature") {
    auto x = Tensor::from_rows({{0.1}, {0.4}, {0.35}, {0.8}, {0.9}, {0.6}});
    std::vector<std::int32_t> y{0, 0, 0, 1, 1, 1};
    auto tree = DecisionTree::fit(x, y);
    CHECK(train_accuracy(tree, x, y) == 1.0);
    CHECK(tree.depth() == 1);
    CHECK(tree.nodes()[0].threshold == doctest::Approx(0.5));
  }
  SUBCASE("XOR needs depth two") {
    auto x = Tensor::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    std::vector<std::int32_t> y{0, 1, 1, 0};
    auto tree = DecisionTree::fit(x, y);
    CHECK(train_accuracy(tree, x, y) == 1.0);
    CHECK(tree.depth() == 2);
    CHECK(train_accuracy(DecisionTree::fit(x, y, 1), x, y) == 0.5);
  }
  SUBCASE("identical inputs predict the lowest majority class") {
    auto x = Tensor::matrix(6, 3, 1.0);
    std::vector<std::int32_t> y{1, 0, 1, 0, 1, 0};
    auto tree = DecisionTree::fit(x, y);
    CHECK(tree.n_leaves() == 1);
    for (auto p : tree.predict(x)) CHECK(p == 0);
    CHECK(train_accuracy(tree, x, y) == 0.5);
  }
  SUBCASE("unlimited depth fits distinct rows exactly") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      auto x = testutil::random_matrix(60, 3, rng);
      std::vector<std::int32_t> y(60);
      std::uniform_int_distribution<int> cls(0, 3);
      for (auto& v : y) v = cls(rng);
      auto tree = DecisionTree::fit(x, y);
      CHECK(train_accuracy(tree, x, y) == 1.0);
      for (const auto& n : tree.nodes())
        if (!n.is_leaf()) CHECK(static_cast<std::size_t>(n.feature) < 3);
    }
  }
  SUBCASE("errors") {
    std::vector<std::int32_t> none;
    CHECK_THROWS_AS(DecisionTree::fit(Tensor::matrix(0, 2), none), ValidationError);
    std::vector<std::int32_t> two{0, 1};
    CHECK_THROWS_AS(DecisionTree::fit(Tensor::matrix(3, 2), two), ValidationError);
    std::vector<std::int32_t> neg{0, -1};
    CHECK_THROWS_AS(DecisionTree::fit(Tensor::matrix(2, 2), neg), ValidationError);
    CHECK_THROWS_AS(DecisionTree::fit(Tensor::matrix(2, 2), two, -1), ParameterError);
    auto tree = DecisionTree::fit(Tensor::from_rows({{0, 1}, {1, 0}}), two);
    CHECK_THROWS_AS(tree.predict(Tensor::matrix(1, 3)), DimensionError);
  }
}

TEST_CASE("node completeness") {
  std::vector<std::int32_t> labels;
  for (int i = 0; i < 40; ++i) labels.push_back(i % 4);
  const auto split = blocks(40);

  SUBCASE("one-hot label encodings are complete") {
    auto q = Tensor::matrix(40, 4, 0.0);
    for (std::size_t i = 0; i < 40; ++i) q(i, static_cast<std::size_t>(labels[i])) = 0.9;
    CHECK(node_completeness(binarize(q), labels, split) == 100.0);
  }
  SUBCASE("a single concept scores the majority rate") {
    std::vector<std::int32_t> binary;
    for (int i = 0; i < 40; ++i) binary.push_back((i / 2) % 2);
    const double c = node_completeness(binarize(Tensor::matrix(40, 3, 0.2)), binary, split);
    CHECK(c == 50.0);
  }
  SUBCASE("degenerate split") {
    graph::SplitSpec empty;
    empty.train_idx = {0, 1};
    CHECK_THROWS_AS(node_completeness(binarize(Tensor::matrix(40, 3, 0.2)), labels, empty), ValidationError);
  }
}

TEST_CASE("graph frequency vectors") {
  // Graph 0 holds concepts {c0 x3, c1 x2}; graph 1 holds one c0.
  auto q = Tensor::from_rows({{0.9, 0.1, 0}, {0.9, 0.1, 0}, {0.1, 0.9, 0}, {0.9, 0.1, 0}, {0.1, 0.9, 0}, {0.9, 0.1, 0}});
  auto b = binarize(q);
  ConceptTable table = b.table;
  table.add(Bits{0, 0, 1});
  std::vector<std::int32_t> membership{0, 0, 0, 0, 0, 1};
  auto f = graph_frequency_vectors(b.encodings, membership, 2, table);
  CHECK(f == Tensor::from_rows({{3, 2, 0}, {1, 0, 0}}));

  SUBCASE("row sums are node counts") {
    std::mt19937_64 rng(4);
    auto r = testutil::random_matrix(200, 4, rng);
    for (auto& v : r.values()) v = std::abs(v);
    auto rb = binarize(r);
    std::vector<std::int32_t> mem(200);
    std::vector<double> sizes(7, 0);
    std::uniform_int_distribution<int> pick(0, 6);
    for (auto& m : mem) sizes[static_cast<std::size_t>(m = pick(rng))] += 1;
    auto rf = graph_frequency_vectors(rb.encodings, mem, 7, rb.table);
    for (std::size_t g = 0; g < 7; ++g) {
      double s = 0;
      for (std::size_t k = 0; k < rf.cols(); ++k) s += rf(g, k);
      CHECK(s == sizes[g]);
    }
  }
  SUBCASE("unknown encodings") {
    ConceptTable small;
    small.add(Bits{1, 0, 0});
    CHECK_THROWS_AS(graph_frequency_vectors(b.encodings, membership, 2, small), ValidationError);
  }
}

TEST_CASE("graph completeness") {
  SUBCASE("a separating column") {
    std::vector<std::int32_t> labels;
    auto f = Tensor::matrix(30, 2, 0.0);
    for (std::size_t g = 0; g < 30; ++g) {
      labels.push_back(static_cast<std::int32_t>(g % 2));
      f(g, 0) = static_cast<double>(g % 2) * 3 + 1;
      f(g, 1) = static_cast<double>(g % 5);
    }
    CHECK(graph_completeness(f, labels, blocks(30)) == 100.0);
  }
  SUBCASE("label-independent counts score near chance") {
    double total = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> count(0, 5);
      std::vector<std::int32_t> labels(400);
      auto f = Tensor::matrix(400, 4);
      for (std::size_t g = 0; g < 400; ++g) {
        labels[g] = static_cast<std::int32_t>(g % 2);
        for (std::size_t k = 0; k < 4; ++k) f(g, k) = count(rng);
      }
      total += graph_completeness(f, labels, graph::split(labels, 0.8, seed));
    }
    CHECK(total / 5 == doctest::Approx(50.0).epsilon(0.2));
  }
}

TEST_CASE("p-hop neighbourhoods") {
  graph::Graph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  SUBCASE("radius zero") {
    auto n = p_hop_neighborhood(path, 1, 0);
    CHECK(n.nodes == std::vector<graph::NodeId>{1});
    CHECK(n.edges.empty());
  }
  SUBCASE("path centre") {
    auto n = p_hop_neighborhood(path, 1, 1);
    CHECK(n.nodes == std::vector<graph::NodeId>{1, 0, 2});
    CHECK(n.distance == std::vector<int>{0, 1, 1});
    CHECK(n.edges.size() == 2);
    CHECK(n.local(2) == 2);
    CHECK(n.local(7) == -1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(p_hop_neighborhood(path, 3, 1), IndexError);
    CHECK_THROWS_AS(p_hop_neighborhood(path, 0, -1), ParameterError);
  }
  SUBCASE("house top reaches the whole house in two hops") {
    const auto g = graph::build_node_dataset(graph::NodeDatasetKind::kBaShapes, 0);
    int checked = 0;
    for (std::size_t v = 0; v < g.n_nodes(); ++v) {
      if (g.node_labels[v] != 1) continue;
      // Template order places the apex last, so the house is v-4 .. v.
      auto n = p_hop_neighborhood(g, static_cast<graph::NodeId>(v), 2);
      int house = 0;
      for (auto id : n.nodes) house += g.motif_mask[id] && id >= static_cast<graph::NodeId>(v) - 4 && id <= static_cast<graph::NodeId>(v);
      CHECK(house == 5);
      ++checked;
    }
    CHECK(checked == 80);
  }
}

TEST_CASE("concept evolution") {
  std::mt19937_64 rng(9);
  auto g = testutil::random_graph(30, 20, rng, 2);
  g.node_labels.resize(30);
  for (std::size_t i = 0; i < 30; ++i) g.node_labels[i] = static_cast<std::int32_t>(i % 2);
  const auto data = model::TaskData::node_task("toy", std::move(g));
  const auto split = graph::split(data.labels(), 0.8, 0);
  for (int layers : {1, 3}) {
    model::ModelConfig cfg;
    cfg.n_layers = layers;
    cfg.hidden = 4;
    cfg.concept_width = 4;
    auto m = model::build_model(cfg, data.task(), data.n_features(), data.n_classes());
    const auto ev = concept_evolution(m, data, split);
    REQUIRE(ev.size() == static_cast<std::size_t>(layers));
    const auto layered = concept_layers(m, data, split);
    CHECK(layered.back().completeness == ev.back());
    CHECK(layered.front().layer == 1);
    for (double c : ev) {
      CHECK(c >= 0);
      CHECK(c <= 100);
    }
    const auto j = report_json(layered.back());
    CHECK(j.at("layer") == layers);
    std::size_t total = 0;
    for (const auto& c : j.at("concepts")) {
      CHECK(c.at("bits").get<std::string>().size() == 4);
      total += c.at("count").get<std::size_t>();
    }
    CHECK(total == 30);
  }
}
