#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cgc::harness {

struct DotToken {
  enum class Kind { kId, kString, kPunct, kEdgeOp, kEnd } kind;
  std::string text;
  int line = 1;
};

// Tokenizes the Graphviz subset we emit: identifiers, numerals, quoted
// strings with escapes, punctuation {}[];=, and edge operators -> and --.
// Throws ParseError on anything else.
std::vector<DotToken> lex_dot(std::string_view text);

struct DotSummary {
  bool directed = false;
  std::string name;
  std::size_t n_node_statements = 0;
  std::size_t n_edges = 0;
  std::size_t n_subgraphs = 0;
};

// Checks the statement grammar (graph/digraph, nested subgraphs, node, edge
// and attribute statements) and counts what it saw. Throws ParseError.
DotSummary parse_dot(std::string_view text);

}  // namespace cgc::harness
