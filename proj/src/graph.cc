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

#include "amreager/graph.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace amreager {

namespace {

// Relations that end in "-of" without being inverses.
constexpr std::array<std::string_view, 3> kLexicalizedOf = {
    ":consist-of", ":prep-out-of", ":prep-on-behalf-of"};

}  // namespace

NodeId AmrGraph::AddVariable(std::string variable, std::string concept_label) {
  if (variable.empty()) throw GraphError("empty variable name");
  if (variables_.count(variable) > 0) {
    throw GraphError("duplicate variable '" + variable + "'");
  }
  Node node;
  node.id = static_cast<NodeId>(nodes_.size());
  node.kind = NodeKind::kVariable;
  node.variable = std::move(variable);
  node.label = std::move(concept_label);
  variables_.emplace(node.variable, node.id);
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

NodeId AmrGraph::AddConstant(std::string value, bool quoted) {
  Node node;
  node.id = static_cast<NodeId>(nodes_.size());
  node.kind = NodeKind::kConstant;
  node.label = std::move(value);
  node.quoted = quoted;
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

void AmrGraph::AddEdge(NodeId source, NodeId target, std::string label) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if (source < 0 || source >= n || target < 0 || target >= n) {
    throw GraphError("edge endpoint out of range");
  }
  if (label.size() < 2 || label[0] != ':') {
    throw GraphError("relation label must start with ':': '" + label + "'");
  }
  if (nodes_[source].is_constant()) {
    throw GraphError("constant '" + nodes_[source].label +
                     "' cannot have outgoing edges");
  }
  edges_.push_back(Edge{source, target, std::move(label)});
}

void AmrGraph::RelabelEdge(size_t index, std::string label) {
  if (label.size() < 2 || label[0] != ':') {
    throw GraphError("relation label must start with ':': '" + label + "'");
  }
  edges_.at(index).label = std::move(label);
}

void AmrGraph::set_root(NodeId id) {
  if (id < 0 || id >= static_cast<NodeId>(nodes_.size())) {
    throw GraphError("root out of range");
  }
  root_ = id;
}

std::optional<NodeId> AmrGraph::FindVariable(std::string_view variable) const {
  auto it = variables_.find(std::string(variable));
  if (it == variables_.end()) return std::nullopt;
  return it->second;
}

std::string AmrGraph::FreshVariable(std::string_view concept_label) const {
  char first = 'x';
  for (char c : concept_label) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      first = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      break;
    }
  }
  std::string candidate(1, first);
  for (int counter = 2; variables_.count(candidate) > 0; ++counter) {
    candidate = std::string(1, first) + std::to_string(counter);
  }
  return candidate;
}

int AmrGraph::InDegree(NodeId id) const {
  return static_cast<int>(std::count_if(
      edges_.begin(), edges_.end(),
      [id](const Edge &e) { return e.target == id; }));
}

int AmrGraph::OutDegree(NodeId id) const {
  return static_cast<int>(std::count_if(
      edges_.begin(), edges_.end(),
      [id](const Edge &e) { return e.source == id; }));
}

std::vector<NodeId> AmrGraph::ReentrantNodes() const {
  std::vector<int> in_degree(nodes_.size(), 0);
  for (const Edge &e : edges_) ++in_degree[e.target];
  std::vector<NodeId> result;
  for (const Node &node : nodes_) {
    if (node.is_variable() && in_degree[node.id] >= 2) result.push_back(node.id);
  }
  return result;
}

bool AmrGraph::HasEdge(NodeId source, NodeId target) const {
  return std::any_of(edges_.begin(), edges_.end(), [&](const Edge &e) {
    return e.source == source && e.target == target;
  });
}

bool AmrGraph::HasCycle() const {
  std::vector<std::vector<NodeId>> children(nodes_.size());
  for (const Edge &e : edges_) children[e.source].push_back(e.target);
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<int> state(nodes_.size(), 0);
  for (NodeId start = 0; start < static_cast<NodeId>(nodes_.size()); ++start) {
    if (state[start] != 0) continue;
    std::vector<std::pair<NodeId, size_t>> stack = {{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto &[current, next] = stack.back();
      if (next < children[current].size()) {
        NodeId child = children[current][next++];
        if (state[child] == 1) return true;
        if (state[child] == 0) {
          state[child] = 1;
          stack.emplace_back(child, 0);
        }
      } else {
        state[current] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

void AmrGraph::Validate() const {
  if (nodes_.empty()) throw GraphError("graph has no nodes");
  if (root_ == kNoNode) throw GraphError("graph has no root");
  if (!nodes_[root_].is_variable()) {
    throw GraphError("root must be a variable node");
  }
  std::unordered_map<std::string, int> seen;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node &node = nodes_[i];
    if (node.id != static_cast<NodeId>(i)) throw GraphError("node id mismatch");
    if (node.is_variable() && ++seen[node.variable] > 1) {
      throw GraphError("duplicate variable '" + node.variable + "'");
    }
  }
  for (const Edge &e : edges_) {
    if (e.source < 0 || e.source >= static_cast<NodeId>(nodes_.size()) ||
        e.target < 0 || e.target >= static_cast<NodeId>(nodes_.size())) {
      throw GraphError("edge endpoint out of range");
    }
    if (nodes_[e.source].is_constant()) {
      throw GraphError("constant with outgoing edge");
    }
    if (e.label.size() < 2 || e.label[0] != ':') {
      throw GraphError("bad relation label '" + e.label + "'");
    }
  }
}

bool IsInverseLabel(std::string_view label) {
  if (label.size() <= 3 || !label.ends_with("-of")) return false;
  return std::find(kLexicalizedOf.begin(), kLexicalizedOf.end(), label) ==
         kLexicalizedOf.end();
}

std::string InvertLabel(std::string_view label) {
  if (IsInverseLabel(label)) {
    return std::string(label.substr(0, label.size() - 3));
  }
  return std::string(label) + "-of";
}

AmrGraph NormalizeInverseEdges(const AmrGraph &graph) {
  AmrGraph result;
  for (const Node &node : graph.nodes()) {
    if (node.is_variable()) {
      result.AddVariable(node.variable, node.label);
    } else {
      result.AddConstant(node.label, node.quoted);
    }
  }
  for (const Edge &e : graph.edges()) {
    if (IsInverseLabel(e.label) && graph.node(e.target).is_variable()) {
      result.AddEdge(e.target, e.source, InvertLabel(e.label));
    } else {
      result.AddEdge(e.source, e.target, e.label);
    }
  }
  if (graph.has_root()) result.set_root(graph.root());
  return result;
}

std::string StripSenseSuffix(std::string_view concept_label) {
  size_t dash = concept_label.rfind('-');
  if (dash == std::string_view::npos || dash == 0 ||
      dash + 1 == concept_label.size()) {
    return std::string(concept_label);
  }
  for (size_t i = dash + 1; i < concept_label.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(concept_label[i]))) {
      return std::string(concept_label);
    }
  }
  return std::string(concept_label.substr(0, dash));
}

std::vector<Triple> ToTriples(const AmrGraph &graph) {
  std::vector<Triple> triples;
  for (const Node &node : graph.nodes()) {
    if (!node.is_variable()) continue;
    triples.push_back(
        {TripleKind::kInstance, node.variable, "instance", node.label, false});
  }
  for (const Edge &e : graph.edges()) {
    const Node &source = graph.node(e.source);
    const Node &target = graph.node(e.target);
    std::string predicate = e.label.substr(1);
    if (target.is_constant()) {
      triples.push_back({TripleKind::kAttribute, source.variable,
                         std::move(predicate), target.label, target.quoted});
    } else {
      triples.push_back({TripleKind::kRelation, source.variable,
                         std::move(predicate), target.variable, false});
    }
  }
  if (graph.has_root()) {
    triples.push_back({TripleKind::kAttribute,
                       graph.node(graph.root()).variable,
                       std::string(kTopPredicate), std::string(kTopValue),
                       false});
  }
  return triples;
}

AmrGraph FromTriples(std::span<const Triple> triples) {
  AmrGraph graph;
  for (const Triple &t : triples) {
    if (t.kind == TripleKind::kInstance) graph.AddVariable(t.subject, t.object);
  }
  auto lookup = [&graph](const std::string &variable) {
    auto id = graph.FindVariable(variable);
    if (!id) throw GraphError("triple references unknown variable '" +
                              variable + "'");
    return *id;
  };
  for (const Triple &t : triples) {
    switch (t.kind) {
      case TripleKind::kInstance:
        break;
      case TripleKind::kAttribute:
        if (t.predicate == kTopPredicate) {
          graph.set_root(lookup(t.subject));
        } else {
          NodeId source = lookup(t.subject);
          NodeId constant = graph.AddConstant(t.object, t.quoted);
          graph.AddEdge(source, constant, ":" + t.predicate);
        }
        break;
      case TripleKind::kRelation:
        graph.AddEdge(lookup(t.subject), lookup(t.object), ":" + t.predicate);
        break;
    }
  }
  return graph;
}

}  // namespace amreager
