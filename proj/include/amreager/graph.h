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

#ifndef AMREAGER_GRAPH_H_
#define AMREAGER_GRAPH_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace amreager {

// Dense index of a node inside its graph.
using NodeId = int;

inline constexpr NodeId kNoNode = -1;

enum class NodeKind { kVariable, kConstant };

struct Node {
  NodeId id = kNoNode;
  NodeKind kind = NodeKind::kVariable;
  std::string variable;  // empty for constants
  std::string label;     // concept for variables, value for constants
  bool quoted = false;   // constant written as a string literal

  bool is_variable() const { return kind == NodeKind::kVariable; }
  bool is_constant() const { return kind == NodeKind::kConstant; }
};

// Directed relation. Labels keep their leading colon, e.g. ":ARG0".
struct Edge {
  NodeId source = kNoNode;
  NodeId target = kNoNode;
  std::string label;

  bool operator==(const Edge &other) const = default;
};

// Thrown when a graph violates one of the structural invariants.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rooted, labeled, directed graph of concept and constant nodes. Node ids
// are dense indices in creation order. The graph is a plain value type.
class AmrGraph {
 public:
  AmrGraph() = default;

  // Adds a variable node. Throws GraphError if the variable already exists.
  NodeId AddVariable(std::string variable, std::string concept_label);

  NodeId AddConstant(std::string value, bool quoted = false);

  // Adds an edge. Throws GraphError for unknown endpoints, labels without a
  // leading ':' and edges leaving a constant.
  void AddEdge(NodeId source, NodeId target, std::string label);

  // Replaces the label of the edge at `index`.
  void RelabelEdge(size_t index, std::string label);

  void set_root(NodeId id);
  NodeId root() const { return root_; }
  bool has_root() const { return root_ != kNoNode; }

  const std::vector<Node> &nodes() const { return nodes_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const Node &node(NodeId id) const { return nodes_.at(id); }
  size_t num_nodes() const { return nodes_.size(); }
  size_t num_variables() const { return variables_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::optional<NodeId> FindVariable(std::string_view variable) const;

  // Returns an unused variable name built from the first letter of the
  // concept plus a counter: "d", "d2", "d3", ...
  std::string FreshVariable(std::string_view concept_label) const;

  int InDegree(NodeId id) const;
  int OutDegree(NodeId id) const;

  // Variable nodes with in-degree of at least two.
  std::vector<NodeId> ReentrantNodes() const;

  bool HasEdge(NodeId source, NodeId target) const;
  bool HasCycle() const;

  // Throws GraphError unless every invariant holds.
  void Validate() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, NodeId> variables_;
  NodeId root_ = kNoNode;
};

// Inverse relations. A label ending in "-of" is the inverse of the label
// without the suffix, except for lexicalized relations such as ":consist-of".
bool IsInverseLabel(std::string_view label);
std::string InvertLabel(std::string_view label);

// Rewrites every inverse edge a -:R-of-> b as b -:R-> a. Edges into
// constants are left alone since a constant cannot be a source.
AmrGraph NormalizeInverseEdges(const AmrGraph &graph);

// want-01 -> want. Labels without a numeric sense suffix are returned as is.
std::string StripSenseSuffix(std::string_view concept_label);

// Canonical triple form used for scoring.
enum class TripleKind { kInstance, kAttribute, kRelation };

struct Triple {
  TripleKind kind = TripleKind::kInstance;
  std::string subject;    // variable
  std::string predicate;  // "instance", "TOP" or relation without ':'
  std::string object;     // concept, constant value or variable
  bool quoted = false;    // attribute object was a string literal

  bool operator==(const Triple &other) const = default;
};

inline constexpr std::string_view kTopPredicate = "TOP";
inline constexpr std::string_view kTopValue = "top";

// One instance triple per variable, one attribute triple per edge into a
// constant, one relation triple per edge between variables, plus TOP.
std::vector<Triple> ToTriples(const AmrGraph &graph);

// Inverse of ToTriples.
AmrGraph FromTriples(std::span<const Triple> triples);

}  // namespace amreager

#endif  // AMREAGER_GRAPH_H_
