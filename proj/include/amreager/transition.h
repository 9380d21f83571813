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

// The shift-reduce transition system for AMR graphs.
//
// A configuration holds a stack of graph nodes (with a ROOT sentinel at the
// bottom), a buffer of unread tokens and the edges built so far. Four
// actions move between configurations:
//
//   Shift      reads the next token and pushes the root of its concept
//              fragment (or nothing, if the token carries no concept)
//   LeftArc    adds an edge from the top node to the node below it
//   RightArc   adds an edge from the second node to the top node; drawn
//              from ROOT it designates the graph root instead
//   Reduce     pops the top node, optionally adding a reentrant edge to a
//              sibling under the same parent
//
// Arc actions never pop. A run ends when stack and buffer are both empty.

#ifndef AMREAGER_TRANSITION_H_
#define AMREAGER_TRANSITION_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amreager/corpus.h"
#include "amreager/graph.h"

namespace amreager {

enum class ActionKind { kShift = 0, kLeftArc = 1, kRightArc = 2, kReduce = 3 };

inline constexpr std::array<ActionKind, 4> kActionKinds = {
    ActionKind::kShift, ActionKind::kLeftArc, ActionKind::kRightArc,
    ActionKind::kReduce};

std::string_view ActionName(ActionKind kind);
std::optional<ActionKind> ActionFromName(std::string_view name);

// Label of the ROOT attachment arc.
inline constexpr std::string_view kRootLabel = ":TOP";

struct Action {
  ActionKind kind = ActionKind::kShift;
  std::string label;       // LeftArc/RightArc, and the reentrant edge
  AmrGraph fragment;       // Shift; empty when the token has no concept
  bool reentrancy = false; // Reduce

  static Action Shift(AmrGraph fragment);
  static Action LeftArc(std::string label);
  static Action RightArc(std::string label);
  static Action Reduce(bool reentrancy = false, std::string label = "");

  std::string ToString() const;
};

// Stack entry standing for the ROOT sentinel.
inline constexpr NodeId kRootSentinel = -2;

class Configuration {
 public:
  explicit Configuration(int num_tokens);

  const std::vector<NodeId> &stack() const { return stack_; }
  int num_tokens() const { return num_tokens_; }
  int buffer_size() const { return num_tokens_ - next_token_; }
  // Token index at buffer position k, or -1 past the end.
  int BufferAt(int k) const;
  // Stack entry k positions below the top, or kNoNode past the bottom.
  NodeId StackAt(int k) const;

  bool terminal() const { return stack_.empty() && buffer_size() == 0; }

  // Nodes and edges built so far; the graph root is not set here.
  const AmrGraph &graph() const { return graph_; }
  // Token whose Shift created the node.
  int TokenOf(NodeId node) const { return node_token_.at(node); }
  NodeId designated_root() const { return designated_root_; }
  const std::vector<Action> &history() const { return history_; }

  bool Connected(NodeId a, NodeId b) const;
  int SubgraphDepth(NodeId node) const;
  int ParentCount(NodeId node) const { return graph_.InDegree(node); }
  int ChildCount(NodeId node) const { return graph_.OutDegree(node); }

 private:
  friend Configuration Apply(Configuration config, const Action &action);

  std::vector<NodeId> stack_;
  int num_tokens_ = 0;
  int next_token_ = 0;
  AmrGraph graph_;
  std::vector<int> node_token_;
  NodeId designated_root_ = kNoNode;
  std::vector<Action> history_;
};

// Shift needs a non-empty buffer. Arcs need two stack entries that are not
// yet connected, a variable as edge source, and may not point into ROOT;
// RightArc from ROOT is legal until a root is designated. Reduce needs two
// stack entries, or only ROOT with an empty buffer. Every non-terminal
// configuration has at least one legal action.
bool IsLegal(const Configuration &config, ActionKind kind);
std::vector<ActionKind> LegalActions(const Configuration &config);

// Endpoints (source, target) of the edge an arc action adds.
std::pair<NodeId, NodeId> ArcEndpoints(const Configuration &config,
                                       ActionKind kind);

// Throws std::invalid_argument for an illegal action.
Configuration Apply(Configuration config, const Action &action);

// (popped node, sibling) for a Reduce in this configuration: the sibling is
// the most recently attached other child of the top node's most recent
// parent that is not already connected to the top node.
std::optional<std::pair<NodeId, NodeId>> ReentrancyCandidate(
    const Configuration &config);

// 2 * |buffer| + |stack|; never increases.
int StackBufferMeasure(const Configuration &config);

// Termination measure that strictly decreases with every action:
// 2 * (2 * |buffer| + |stack|) plus one while an arc is still legal.
int ProgressMeasure(const Configuration &config);

struct BuildStats {
  bool root_fallback = false;  // no ROOT attachment was made
  int stranded_repairs = 0;    // components attached to the root via :mod
  int constants_split = 0;     // shared constants duplicated
};

// Assembles the output graph: takes the designated root (or the parentless
// node reaching most nodes), gives every shared constant its own copy,
// and links stranded components to the root with :mod. A run without
// nodes yields (a / amr-empty).
AmrGraph BuildGraph(const Configuration &config, BuildStats *stats = nullptr);

// Concept fragments ------------------------------------------------------

// Fragment text: PENMAN for a variable-rooted fragment, a single atom for a
// constant, "" for no fragment.
std::string FormatFragment(const AmrGraph &fragment);
AmrGraph ParseFragment(std::string_view text);

// Gold fragments of an aligned example. The fragment of a token holds its
// aligned nodes plus their unaligned descendants (claimed in token order);
// its root is the aligned node without a parent inside the fragment.
struct TokenFragments {
  std::vector<std::vector<NodeId>> nodes;  // per token, gold ids
  std::vector<NodeId> root;                // per token, kNoNode if none
  std::vector<int> owner;                  // per gold node, token or -1
};

TokenFragments ExtractFragments(const AmrGraph &normalized,
                                const Alignment &alignment, int num_tokens);

// Copies a token fragment out of the gold graph as a standalone template.
AmrGraph FragmentGraph(const AmrGraph &normalized,
                       const std::vector<NodeId> &nodes, NodeId root);

// The concept dictionary: token lemma -> fragment templates with counts.
class ConceptTable {
 public:
  void Add(const std::string &lemma, const std::string &fragment,
           int count = 1);

  // Most frequent template for the lemma (ties: smallest text).
  std::optional<std::string> Find(const std::string &lemma) const;

  // Exact lemma hit, else the fallback chain: stopwords and punctuation map
  // to nothing; entity-tagged tokens to a named-entity template; numbers to
  // a constant; verbs to "lemma-01"; anything else to "lemma".
  AmrGraph Lookup(const Token &token) const;

  size_t size() const { return entries_.size(); }

  // "lemma<TAB>count<TAB>fragment" lines sorted by lemma, then count
  // descending, then fragment.
  std::string ToText() const;
  static ConceptTable FromText(std::string_view text);

 private:
  std::map<std::string, std::map<std::string, int>> entries_;
};

ConceptTable BuildConceptTable(std::span<const AnnotatedExample> examples);

bool IsStopword(const Token &token);

}  // namespace amreager

#endif  // AMREAGER_TRANSITION_H_
