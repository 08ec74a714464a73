#include "cgc/graph/tu_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cgc/error.hpp"

namespace cgc::graph {
namespace {

namespace fs = std::filesystem;

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

long long parse_int(std::string_view token, const fs::path& file, std::size_t line_no) {
  token = trim(token);
  long long value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(file.filename().string() + ":" + std::to_string(line_no) +
                     ": expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

// One integer per non-empty line.
std::vector<long long> read_column(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<long long> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    out.push_back(parse_int(line, file, line_no));
  }
  return out;
}

std::vector<std::pair<long long, long long>> read_edges(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<std::pair<long long, long long>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto comma = view.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(file.filename().string() + ":" + std::to_string(line_no) +
                       ": expected 'i, j', got '" + std::string(view) + "'");
    }
    out.emplace_back(parse_int(view.substr(0, comma), file, line_no),
                     parse_int(view.substr(comma + 1), file, line_no));
  }
  return out;
}

fs::path require_file(const fs::path& dir, const std::string& name) {
  fs::path p = dir / name;
  if (!fs::exists(p)) throw IoError("missing TU file " + p.string());
  return p;
}

}  // namespace

GraphSet load_tu(const fs::path& dir) {
  const std::string ds = dir.filename().empty() ? dir.parent_path().filename().string()
                                                : dir.filename().string();
  const auto edges_file = require_file(dir, ds + "_A.txt");
  const auto indicator_file = require_file(dir, ds + "_graph_indicator.txt");
  const auto labels_file = require_file(dir, ds + "_graph_labels.txt");
  const fs::path node_labels_file = dir / (ds + "_node_labels.txt");

  const auto indicator = read_column(indicator_file);
  const auto raw_graph_labels = read_column(labels_file);
  const auto edges = read_edges(edges_file);
  std::vector<long long> raw_node_labels;
  const bool has_node_labels = fs::exists(node_labels_file);
  if (has_node_labels) {
    raw_node_labels = read_column(node_labels_file);
    if (raw_node_labels.size() != indicator.size()) {
      throw ValidationError(node_labels_file.filename().string() + " has " +
                            std::to_string(raw_node_labels.size()) + " lines, expected " +
                            std::to_string(indicator.size()));
    }
  }

  const std::size_t n_graphs = raw_graph_labels.size();
  // Per node: owning graph and local id. Graph ids are 1-based and nondecreasing.
  std::vector<std::size_t> owner(indicator.size());
  std::vector<NodeId> local(indicator.size());
  std::vector<std::size_t> sizes(n_graphs, 0);
  for (std::size_t i = 0; i < indicator.size(); ++i) {
    const long long gid = indicator[i];
    if (gid < 1 || static_cast<std::size_t>(gid) > n_graphs) {
      throw ValidationError(indicator_file.filename().string() + ":" + std::to_string(i + 1) +
                            ": graph id " + std::to_string(gid) + " outside 1.." + std::to_string(n_graphs));
    }
    if (i > 0 && gid < indicator[i - 1]) {
      throw ValidationError(indicator_file.filename().string() + ":" + std::to_string(i + 1) +
                            ": graph ids must be nondecreasing");
    }
    owner[i] = static_cast<std::size_t>(gid - 1);
    local[i] = static_cast<NodeId>(sizes[owner[i]]++);
  }

  std::map<long long, std::int32_t> node_label_ids;
  for (long long l : raw_node_labels) node_label_ids.emplace(l, 0);
  std::int32_t next = 0;
  for (auto& [value, id] : node_label_ids) id = next++;
  const std::size_t n_features = has_node_labels ? node_label_ids.size() : 1;

  std::map<long long, std::int32_t> graph_label_ids;
  for (long long l : raw_graph_labels) graph_label_ids.emplace(l, 0);
  next = 0;
  for (auto& [value, id] : graph_label_ids) id = next++;

  GraphSet set;
  set.name = ds;
  set.graphs.reserve(n_graphs);
  for (std::size_t g = 0; g < n_graphs; ++g) {
    Graph graph(sizes[g]);
    graph.features = diff::Tensor::matrix(sizes[g], n_features, has_node_labels ? 0.0 : 1.0);
    set.graphs.push_back(std::move(graph));
    set.graph_labels.push_back(graph_label_ids.at(raw_graph_labels[g]));
  }
  if (has_node_labels) {
    for (std::size_t i = 0; i < indicator.size(); ++i) {
      const auto col = static_cast<std::size_t>(node_label_ids.at(raw_node_labels[i]));
      set.graphs[owner[i]].features(static_cast<std::size_t>(local[i]), col) = 1.0;
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    const auto n_total = static_cast<long long>(indicator.size());
    if (a < 1 || b < 1 || a > n_total || b > n_total) {
      throw ValidationError(edges_file.filename().string() + ":" + std::to_string(e + 1) +
                            ": node id outside 1.." + std::to_string(n_total));
    }
    const auto ia = static_cast<std::size_t>(a - 1);
    const auto ib = static_cast<std::size_t>(b - 1);
    if (owner[ia] != owner[ib]) {
      throw ValidationError(edges_file.filename().string() + ":" + std::to_string(e + 1) +
                            ": edge (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") crosses graphs " + std::to_string(owner[ia] + 1) + " and " +
                            std::to_string(owner[ib] + 1));
    }
    set.graphs[owner[ia]].add_edge(local[ia], local[ib]);
  }
  set.validate();
  return set;
}

void save_tu(const GraphSet& set, const fs::path& dir) {
  const fs::path out = dir / set.name;
  fs::create_directories(out);
  std::ofstream a(out / (set.name + "_A.txt"));
  std::ofstream ind(out / (set.name + "_graph_indicator.txt"));
  std::ofstream gl(out / (set.name + "_graph_labels.txt"));
  if (!a || !ind || !gl) throw IoError("cannot write TU files under " + out.string());
  const bool one_hot = set.n_features() > 1;
  std::ofstream nl;
  if (one_hot) {
    nl.open(out / (set.name + "_node_labels.txt"));
    if (!nl) throw IoError("cannot write node labels under " + out.string());
  }
  std::size_t offset = 1;
  for (std::size_t g = 0; g < set.size(); ++g) {
    const Graph& graph = set.graphs[g];
    for (std::size_t i = 0; i < graph.n_nodes(); ++i) {
      ind << g + 1 << '\n';
      if (one_hot) {
        auto row = graph.features.row(i);
        nl << std::distance(row.begin(), std::max_element(row.begin(), row.end())) << '\n';
      }
    }
    for (auto [u, v] : graph.directed_edges()) {
      a << offset + static_cast<std::size_t>(u) << ", " << offset + static_cast<std::size_t>(v) << '\n';
    }
    gl << set.graph_labels[g] << '\n';
    offset += graph.n_nodes();
  }
}

}  // namespace cgc::graph
