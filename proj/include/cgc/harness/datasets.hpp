#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgc/model/data.hpp"

namespace cgc::harness {

// Seed every synthetic dataset is generated with; run seeds only vary the
// split and the initialisation.
inline constexpr std::uint64_t kDataSeed = 0;

const std::vector<std::string>& node_datasets();
const std::vector<std::string>& graph_datasets();
const std::vector<std::string>& real_world_datasets();
// Every dataset in table order: node, synthetic graph, real world.
std::vector<std::string> all_datasets();

bool is_real_world(std::string_view name);
// TU directory name of a real-world dataset ("Mutagenicity", "REDDIT-BINARY").
std::string tu_name(std::string_view name);

// Generates a synthetic dataset or loads a real-world one from
// tu_dir/<tu_name>. Throws IoError when the TU files are missing.
model::TaskData load_dataset(std::string_view name, std::uint64_t data_seed = kDataSeed,
                             const std::optional<std::filesystem::path>& tu_dir = std::nullopt);

// True when `name` is synthetic or its TU directory exists under tu_dir.
bool dataset_available(std::string_view name, const std::optional<std::filesystem::path>& tu_dir);

// Disjoint union of a graph set's graphs, node ids shifted in set order.
graph::Graph union_graph(const graph::GraphSet& set);

}  // namespace cgc::harness
