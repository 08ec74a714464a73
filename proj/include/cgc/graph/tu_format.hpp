#pragma once

#include <filesystem>

#include "cgc/graph/graph.hpp"

namespace cgc::graph {

// Reads a TU-format directory named DS holding DS_A.txt (1-based "i, j" edge
// lines), DS_graph_indicator.txt, DS_graph_labels.txt and optionally
// DS_node_labels.txt. Node labels become one-hot features (constant 1 when
// absent); graph labels are remapped to contiguous ids in ascending order of
// the original values. Throws IoError, ParseError or ValidationError.
GraphSet load_tu(const std::filesystem::path& dir);

// Writes `set` in the same layout under dir/name/. Features must be one-hot
// (written as node labels) or a single constant column (no node label file).
void save_tu(const GraphSet& set, const std::filesystem::path& dir);

}  // namespace cgc::graph
