#include "cgc/harness/dot.hpp"

#include <cctype>

#include "cgc/error.hpp"

namespace cgc::harness {
namespace {

bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

class Parser {
 public:
  explicit Parser(std::vector<DotToken> tokens) : t_(std::move(tokens)) {}

  DotSummary run() {
    DotSummary s;
    if (peek_id("strict")) ++i_;
    if (peek_id("digraph")) {
      s.directed = true;
    } else if (!peek_id("graph")) {
      fail("expected 'graph' or 'digraph'");
    }
    ++i_;
    if (is_id()) s.name = t_[i_++].text;
    directed_ = s.directed;
    block(s);
    if (t_[i_].kind != DotToken::Kind::kEnd) fail("trailing tokens after the graph body");
    return s;
  }

 private:
  const DotToken& cur() const { return t_[i_]; }
  bool is_id() const { return cur().kind == DotToken::Kind::kId || cur().kind == DotToken::Kind::kString; }
  bool peek_id(std::string_view s) const { return cur().kind == DotToken::Kind::kId && cur().text == s; }
  bool peek_punct(char c) const { return cur().kind == DotToken::Kind::kPunct && cur().text[0] == c; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("dot line " + std::to_string(cur().line) + ": " + what + " near '" + cur().text + "'");
  }
  void expect(char c) {
    if (!peek_punct(c)) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  void block(DotSummary& s) {
    expect('{');
    while (!peek_punct('}')) {
      if (cur().kind == DotToken::Kind::kEnd) fail("unterminated block");
      statement(s);
      if (peek_punct(';')) ++i_;
    }
    ++i_;
  }

  void attr_list() {
    while (peek_punct('[')) {
      ++i_;
      while (!peek_punct(']')) {
        if (!is_id()) fail("expected attribute name");
        ++i_;
        expect('=');
        if (!is_id()) fail("expected attribute value");
        ++i_;
        if (peek_punct(',') || peek_punct(';')) ++i_;
      }
      ++i_;
    }
  }

  void statement(DotSummary& s) {
    if (peek_id("subgraph") || peek_punct('{')) {
      if (peek_id("subgraph")) {
        ++i_;
        if (is_id()) ++i_;
      }
      ++s.n_subgraphs;
      block(s);
      return;
    }
    if (peek_id("graph") || peek_id("node") || peek_id("edge")) {
      ++i_;
      if (!peek_punct('[')) fail("expected attribute list");
      attr_list();
      return;
    }
    if (!is_id()) fail("expected a statement");
    ++i_;
    if (peek_punct('=')) {
      ++i_;
      if (!is_id()) fail("expected a value");
      ++i_;
      return;
    }
    if (cur().kind == DotToken::Kind::kEdgeOp) {
      while (cur().kind == DotToken::Kind::kEdgeOp) {
        if ((cur().text == "->") != directed_) fail("edge operator does not match the graph type");
        ++i_;
        if (!is_id()) fail("expected an edge endpoint");
        ++i_;
        ++s.n_edges;
      }
    } else {
      ++s.n_node_statements;
    }
    attr_list();
  }

  std::vector<DotToken> t_;
  std::size_t i_ = 0;
  bool directed_ = false;
};

}  // namespace

std::vector<DotToken> lex_dot(std::string_view text) {
  std::vector<DotToken> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '"') {
      std::string s;
      const int start = line;
      ++i;
      while (true) {
        if (i >= text.size()) throw ParseError("dot line " + std::to_string(start) + ": unterminated string");
        if (text[i] == '"') break;
        if (text[i] == '\\' && i + 1 < text.size()) s += text[i++];
        if (text[i] == '\n') ++line;
        s += text[i++];
      }
      ++i;
      out.push_back({DotToken::Kind::kString, std::move(s), start});
    } else if (c == '-' && i + 1 < text.size() && (text[i + 1] == '>' || text[i + 1] == '-')) {
      out.push_back({DotToken::Kind::kEdgeOp, std::string(text.substr(i, 2)), line});
      i += 2;
    } else if (std::string_view("{}[];=,").find(c) != std::string_view::npos) {
      out.push_back({DotToken::Kind::kPunct, std::string(1, c), line});
      ++i;
    } else if (id_char(c) || c == '-') {
      const std::size_t b = i++;
      while (i < text.size() && id_char(text[i])) ++i;
      out.push_back({DotToken::Kind::kId, std::string(text.substr(b, i - b)), line});
    } else {
      throw ParseError("dot line " + std::to_string(line) + ": unexpected character '" + std::string(1, c) + "'");
    }
  }
  out.push_back({DotToken::Kind::kEnd, "", line});
  return out;
}

DotSummary parse_dot(std::string_view text) { return Parser(lex_dot(text)).run(); }

}  // namespace cgc::harness
