// Copyright 2026 The AmrEager Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "amreager/penman.h"

#include <algorithm>
#include <cctype>
#include <deque>
#include <tuple>
#include <vector>

namespace amreager {

PenmanError::PenmanError(const std::string &message, size_t offset)
    : std::runtime_error(message + " at byte " + std::to_string(offset)),
      offset_(offset) {}

namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

bool IsVariableShaped(std::string_view symbol) {
  if (symbol.empty() || !std::isalpha(static_cast<unsigned char>(symbol[0]))) {
    return false;
  }
  return std::all_of(symbol.begin() + 1, symbol.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

// Drops JAMR/ISI alignment markers such as "dog~e.3".
std::string StripAlignmentMarker(std::string_view symbol) {
  size_t tilde = symbol.find('~');
  if (tilde != std::string_view::npos && tilde > 0 &&
      tilde + 1 < symbol.size() &&
      (symbol[tilde + 1] == 'e' ||
       std::isdigit(static_cast<unsigned char>(symbol[tilde + 1])))) {
    return std::string(symbol.substr(0, tilde));
  }
  return std::string(symbol);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  PenmanParse Parse() {
    SkipSpace();
    if (AtEnd()) throw PenmanError("empty PENMAN expression", pos_);
    if (Peek() != '(') throw PenmanError("expected '('", pos_);
    NodeId root = ParseNode("0");
    SkipSpace();
    if (!AtEnd()) {
      if (Peek() == ')') {
        throw PenmanError("unbalanced parentheses: unexpected ')'", pos_);
      }
      throw PenmanError("unexpected text after expression", pos_);
    }
    Resolve();
    result_.graph.set_root(root);
    return std::move(result_);
  }

 private:
  // A relation occurrence whose target is resolved after the whole
  // expression has been read, so forward references work.
  struct Occurrence {
    NodeId source;
    std::string label;
    enum class Kind { kNode, kSymbol, kString } kind;
    NodeId child = kNoNode;
    std::string value;
    std::string path;
    size_t offset = 0;
  };

  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return text_[pos_]; }

  void SkipSpace() {
    while (!AtEnd() && IsSpace(Peek())) ++pos_;
  }

  std::string ReadSymbol(bool stop_at_slash) {
    size_t start = pos_;
    while (!AtEnd()) {
      char c = Peek();
      if (IsSpace(c) || c == '(' || c == ')') break;
      if (stop_at_slash && c == '/') break;
      ++pos_;
    }
    return StripAlignmentMarker(text_.substr(start, pos_ - start));
  }

  std::string ReadString() {
    size_t start = pos_;
    ++pos_;  // opening quote
    std::string value;
    while (true) {
      if (AtEnd()) throw PenmanError("unterminated string", start);
      char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (AtEnd()) throw PenmanError("unterminated string", start);
        c = text_[pos_++];
      }
      value.push_back(c);
    }
    // Alignment marker glued to the closing quote.
    if (!AtEnd() && Peek() == '~') ReadSymbol(false);
    return value;
  }

  NodeId ParseNode(const std::string &path) {
    size_t open = pos_;
    ++pos_;  // '('
    SkipSpace();
    size_t variable_offset = pos_;
    if (AtEnd()) throw PenmanError("unbalanced parentheses: missing ')'", open);
    std::string variable = ReadSymbol(true);
    if (variable.empty()) throw PenmanError("expected variable", pos_);
    SkipSpace();
    if (AtEnd() || Peek() != '/') {
      throw PenmanError("expected '/' after variable '" + variable + "'", pos_);
    }
    ++pos_;
    SkipSpace();
    if (AtEnd()) throw PenmanError("unbalanced parentheses: missing ')'", open);
    std::string concept_label;
    if (Peek() == '"') {
      concept_label = ReadString();
    } else {
      concept_label = ReadSymbol(false);
    }
    if (concept_label.empty()) throw PenmanError("expected concept", pos_);
    if (result_.graph.FindVariable(variable)) {
      throw PenmanError("duplicate variable definition '" + variable + "'",
                        variable_offset);
    }
    NodeId id = result_.graph.AddVariable(variable, concept_label);
    result_.paths.emplace(path, id);

    int index = 0;
    while (true) {
      SkipSpace();
      if (AtEnd()) {
        throw PenmanError("unbalanced parentheses: missing ')'", open);
      }
      char c = Peek();
      if (c == ')') {
        ++pos_;
        return id;
      }
      if (c != ':') {
        throw PenmanError("relation must start with ':'", pos_);
      }
      size_t label_offset = pos_;
      std::string label = ReadSymbol(false);
      if (label.size() < 2) throw PenmanError("empty relation", label_offset);
      SkipSpace();
      if (AtEnd()) {
        throw PenmanError("unbalanced parentheses: missing ')'", open);
      }
      Occurrence occurrence;
      occurrence.source = id;
      occurrence.label = std::move(label);
      occurrence.path = path + "." + std::to_string(index++);
      occurrence.offset = pos_;
      c = Peek();
      if (c == '(') {
        occurrence.kind = Occurrence::Kind::kNode;
        occurrence.child = ParseNode(occurrence.path);
      } else if (c == '"') {
        occurrence.kind = Occurrence::Kind::kString;
        occurrence.value = ReadString();
      } else if (c == ')' || c == ':') {
        throw PenmanError("relation '" + occurrence.label + "' has no value",
                          pos_);
      } else {
        occurrence.kind = Occurrence::Kind::kSymbol;
        occurrence.value = ReadSymbol(false);
      }
      occurrences_.push_back(std::move(occurrence));
    }
  }

  void Resolve() {
    AmrGraph &graph = result_.graph;
    for (Occurrence &o : occurrences_) {
      NodeId target = kNoNode;
      switch (o.kind) {
        case Occurrence::Kind::kNode:
          target = o.child;
          break;
        case Occurrence::Kind::kString:
          target = graph.AddConstant(o.value, true);
          break;
        case Occurrence::Kind::kSymbol:
          if (auto ref = graph.FindVariable(o.value)) {
            target = *ref;
          } else if (IsVariableShaped(o.value)) {
            throw PenmanError("dangling variable reference '" + o.value + "'",
                              o.offset);
          } else {
            target = graph.AddConstant(o.value, false);
          }
          break;
      }
      graph.AddEdge(o.source, target, o.label);
      result_.paths.emplace(o.path, target);
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  PenmanParse result_;
  std::vector<Occurrence> occurrences_;
};

// Child entry of a node in the serialized tree.
struct Child {
  std::string label;
  NodeId node;
};

// Decides edge orientation for printing and returns the sorted child list
// of every node.
std::vector<std::vector<Child>> Layout(const AmrGraph &graph) {
  if (!graph.has_root()) throw GraphError("graph has no root");
  if (!graph.node(graph.root()).is_variable()) {
    throw GraphError("root must be a variable node");
  }
  const auto &edges = graph.edges();
  const size_t n = graph.num_nodes();
  std::vector<bool> flipped(edges.size(), false);
  std::vector<bool> reached(n, false);
  std::vector<std::vector<size_t>> out(n), in(n);
  for (size_t i = 0; i < edges.size(); ++i) {
    out[edges[i].source].push_back(i);
    in[edges[i].target].push_back(i);
  }

  auto spread = [&](NodeId start) {
    std::deque<NodeId> queue = {start};
    reached[start] = true;
    while (!queue.empty()) {
      NodeId current = queue.front();
      queue.pop_front();
      auto visit = [&](NodeId next) {
        if (!reached[next]) {
          reached[next] = true;
          queue.push_back(next);
        }
      };
      for (size_t e : out[current]) {
        if (!flipped[e]) visit(edges[e].target);
      }
      for (size_t e : in[current]) {
        if (flipped[e]) visit(edges[e].source);
      }
    }
  };
  spread(graph.root());

  while (true) {
    if (std::all_of(reached.begin(), reached.end(), [](bool r) { return r; })) {
      break;
    }
    // Invert the smallest edge (by label, then endpoints) that leads from a
    // reached variable back to an unreached one.
    std::optional<size_t> best;
    for (size_t i = 0; i < edges.size(); ++i) {
      const Edge &e = edges[i];
      if (flipped[i] || !reached[e.target] || reached[e.source]) continue;
      if (!graph.node(e.target).is_variable()) continue;
      if (!best || std::tie(e.label, e.target, e.source) <
                       std::tie(edges[*best].label, edges[*best].target,
                                edges[*best].source)) {
        best = i;
      }
    }
    if (!best) {
      for (NodeId id = 0; id < static_cast<NodeId>(n); ++id) {
        if (!reached[id]) {
          const Node &node = graph.node(id);
          throw GraphError("node '" +
                           (node.is_variable() ? node.variable : node.label) +
                           "' is unreachable from the root");
        }
      }
    }
    flipped[*best] = true;
    spread(edges[*best].source);
  }

  std::vector<std::vector<Child>> children(n);
  for (size_t i = 0; i < edges.size(); ++i) {
    const Edge &e = edges[i];
    if (flipped[i]) {
      children[e.target].push_back({InvertLabel(e.label), e.source});
    } else {
      children[e.source].push_back({e.label, e.target});
    }
  }
  for (auto &list : children) {
    std::sort(list.begin(), list.end(), [](const Child &a, const Child &b) {
      return std::tie(a.label, a.node) < std::tie(b.label, b.node);
    });
  }
  return children;
}

class Writer {
 public:
  Writer(const AmrGraph &graph, PenmanStyle style)
      : graph_(graph),
        style_(style),
        children_(Layout(graph)),
        visited_(graph.num_nodes(), false) {}

  std::string Write() {
    WriteNode(graph_.root(), 1, "0");
    return std::move(out_);
  }

  std::map<NodeId, std::string> Paths() {
    WriteNode(graph_.root(), 1, "0");
    return std::move(paths_);
  }

 private:
  void WriteNode(NodeId id, int depth, const std::string &path) {
    const Node &node = graph_.node(id);
    if (node.is_constant()) {
      out_ += FormatAtom(node.label, node.quoted || NeedsQuotes(node.label));
      paths_.emplace(id, path);
      return;
    }
    if (visited_[id]) {
      out_ += node.variable;
      return;
    }
    visited_[id] = true;
    paths_.emplace(id, path);
    out_ += "(";
    out_ += node.variable;
    out_ += " / ";
    out_ += FormatAtom(node.label, false);
    int index = 0;
    for (const Child &child : children_[id]) {
      if (style_ == PenmanStyle::kIndented) {
        out_ += "\n";
        out_.append(static_cast<size_t>(depth) * 4, ' ');
      } else {
        out_ += " ";
      }
      out_ += child.label;
      out_ += " ";
      WriteNode(child.node, depth + 1, path + "." + std::to_string(index++));
    }
    out_ += ")";
  }

  // Unquoted constants must not read back as variable references.
  bool NeedsQuotes(const std::string &value) const {
    return IsVariableShaped(value) || graph_.FindVariable(value).has_value();
  }

  const AmrGraph &graph_;
  PenmanStyle style_;
  std::vector<std::vector<Child>> children_;
  std::vector<bool> visited_;
  std::map<NodeId, std::string> paths_;
  std::string out_;
};

}  // namespace

AmrGraph ParsePenman(std::string_view text) {
  return Reader(text).Parse().graph;
}

PenmanParse ParsePenmanWithPaths(std::string_view text) {
  return Reader(text).Parse();
}

std::string SerializePenman(const AmrGraph &graph, PenmanStyle style) {
  return Writer(graph, style).Write();
}

std::map<NodeId, std::string> NodePaths(const AmrGraph &graph) {
  return Writer(graph, PenmanStyle::kSingleLine).Paths();
}

std::string FormatAtom(std::string_view value, bool quoted) {
  bool needs_quotes = quoted || value.empty() || value[0] == ':' ||
                      value[0] == '"';
  for (char c : value) {
    if (IsSpace(c) || c == '(' || c == ')' || c == '"' || c == '~') {
      needs_quotes = true;
    }
  }
  if (!needs_quotes) return std::string(value);
  std::string result = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') result.push_back('\\');
    result.push_back(c);
  }
  result.push_back('"');
  return result;
}

}  // namespace amreager
