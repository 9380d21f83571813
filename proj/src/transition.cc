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

#include "amreager/transition.h"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <stdexcept>

#include "amreager/errors.h"
#include "amreager/penman.h"
#include "amreager/strings.h"

namespace amreager {

std::string_view ActionName(ActionKind kind) {
  switch (kind) {
    case ActionKind::kShift: return "Shift";
    case ActionKind::kLeftArc: return "LArc";
    case ActionKind::kRightArc: return "RArc";
    case ActionKind::kReduce: return "Reduce";
  }
  return "?";
}

std::optional<ActionKind> ActionFromName(std::string_view name) {
  for (ActionKind kind : kActionKinds) {
    if (ActionName(kind) == name) return kind;
  }
  return std::nullopt;
}

Action Action::Shift(AmrGraph fragment) {
  Action a;
  a.kind = ActionKind::kShift;
  a.fragment = std::move(fragment);
  return a;
}

Action Action::LeftArc(std::string label) {
  Action a;
  a.kind = ActionKind::kLeftArc;
  a.label = std::move(label);
  return a;
}

Action Action::RightArc(std::string label) {
  Action a;
  a.kind = ActionKind::kRightArc;
  a.label = std::move(label);
  return a;
}

Action Action::Reduce(bool reentrancy, std::string label) {
  Action a;
  a.kind = ActionKind::kReduce;
  a.reentrancy = reentrancy;
  a.label = std::move(label);
  return a;
}

std::string Action::ToString() const {
  std::string out(ActionName(kind));
  switch (kind) {
    case ActionKind::kShift:
      out += "(" + FormatFragment(fragment) + ")";
      break;
    case ActionKind::kLeftArc:
    case ActionKind::kRightArc:
      out += "(" + label + ")";
      break;
    case ActionKind::kReduce:
      out += reentrancy ? "(+" + label + ")" : "(-)";
      break;
  }
  return out;
}

Configuration::Configuration(int num_tokens)
    : stack_({kRootSentinel}), num_tokens_(num_tokens) {}

int Configuration::BufferAt(int k) const {
  int token = next_token_ + k;
  return token < num_tokens_ ? token : -1;
}

NodeId Configuration::StackAt(int k) const {
  if (k < 0 || k >= static_cast<int>(stack_.size())) return kNoNode;
  return stack_[stack_.size() - 1 - k];
}

bool Configuration::Connected(NodeId a, NodeId b) const {
  return graph_.HasEdge(a, b) || graph_.HasEdge(b, a);
}

int Configuration::SubgraphDepth(NodeId node) const {
  // Longest downward path; each node is expanded once, so cycles cannot
  // loop forever.
  std::vector<int> depth(graph_.num_nodes(), -1);
  std::vector<bool> active(graph_.num_nodes(), false);
  auto visit = [&](auto &&self, NodeId n) -> int {
    if (depth[n] >= 0) return depth[n];
    if (active[n]) return 0;
    active[n] = true;
    int best = 0;
    for (const Edge &e : graph_.edges()) {
      if (e.source == n) best = std::max(best, 1 + self(self, e.target));
    }
    active[n] = false;
    return depth[n] = best;
  };
  return visit(visit, node);
}

std::pair<NodeId, NodeId> ArcEndpoints(const Configuration &config,
                                       ActionKind kind) {
  NodeId top = config.StackAt(0);
  NodeId second = config.StackAt(1);
  if (kind == ActionKind::kLeftArc) return {top, second};
  return {second, top};
}

bool IsLegal(const Configuration &config, ActionKind kind) {
  const int height = static_cast<int>(config.stack().size());
  switch (kind) {
    case ActionKind::kShift:
      return config.buffer_size() > 0;
    case ActionKind::kReduce:
      return height >= 2 || (height == 1 && config.buffer_size() == 0);
    case ActionKind::kLeftArc:
    case ActionKind::kRightArc: {
      if (height < 2) return false;
      auto [source, target] = ArcEndpoints(config, kind);
      if (target == kRootSentinel) return false;
      const AmrGraph &graph = config.graph();
      if (source == kRootSentinel) {
        return config.designated_root() == kNoNode &&
               graph.node(target).is_variable();
      }
      return graph.node(source).is_variable() &&
             !config.Connected(source, target);
    }
  }
  return false;
}

std::vector<ActionKind> LegalActions(const Configuration &config) {
  std::vector<ActionKind> legal;
  for (ActionKind kind : kActionKinds) {
    if (IsLegal(config, kind)) legal.push_back(kind);
  }
  return legal;
}

std::optional<std::pair<NodeId, NodeId>> ReentrancyCandidate(
    const Configuration &config) {
  NodeId popped = config.StackAt(0);
  if (popped == kNoNode || popped == kRootSentinel) return std::nullopt;
  const AmrGraph &graph = config.graph();
  if (!graph.node(popped).is_variable()) return std::nullopt;
  const auto &edges = graph.edges();
  NodeId parent = kNoNode;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    if (it->target == popped) {
      parent = it->source;
      break;
    }
  }
  if (parent == kNoNode) return std::nullopt;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    if (it->source != parent || it->target == popped) continue;
    if (config.Connected(popped, it->target)) continue;
    return std::make_pair(popped, it->target);
  }
  return std::nullopt;
}

Configuration Apply(Configuration config, const Action &action) {
  if (!IsLegal(config, action.kind)) {
    throw std::invalid_argument("illegal action " + action.ToString());
  }
  switch (action.kind) {
    case ActionKind::kShift: {
      const int token = config.next_token_++;
      const AmrGraph &fragment = action.fragment;
      if (fragment.empty()) break;
      std::vector<NodeId> mapping(fragment.num_nodes());
      for (const Node &node : fragment.nodes()) {
        if (node.is_variable()) {
          mapping[node.id] = config.graph_.AddVariable(
              config.graph_.FreshVariable(node.label), node.label);
        } else {
          mapping[node.id] = config.graph_.AddConstant(node.label, node.quoted);
        }
        config.node_token_.push_back(token);
      }
      for (const Edge &e : fragment.edges()) {
        config.graph_.AddEdge(mapping[e.source], mapping[e.target], e.label);
      }
      NodeId root = fragment.has_root() ? fragment.root() : 0;
      config.stack_.push_back(mapping[root]);
      break;
    }
    case ActionKind::kLeftArc:
    case ActionKind::kRightArc: {
      auto [source, target] = ArcEndpoints(config, action.kind);
      if (source == kRootSentinel) {
        config.designated_root_ = target;
      } else {
        config.graph_.AddEdge(source, target, action.label);
      }
      break;
    }
    case ActionKind::kReduce: {
      if (action.reentrancy) {
        if (auto candidate = ReentrancyCandidate(config)) {
          config.graph_.AddEdge(candidate->first, candidate->second,
                                action.label);
        }
      }
      config.stack_.pop_back();
      break;
    }
  }
  config.history_.push_back(action);
  return config;
}

int StackBufferMeasure(const Configuration &config) {
  return 2 * config.buffer_size() + static_cast<int>(config.stack().size());
}

int ProgressMeasure(const Configuration &config) {
  bool arc = IsLegal(config, ActionKind::kLeftArc) ||
             IsLegal(config, ActionKind::kRightArc);
  return 2 * StackBufferMeasure(config) + (arc ? 1 : 0);
}

namespace {

// Nodes reachable from `start` along normalized edge direction.
int Reach(const AmrGraph &normalized, NodeId start) {
  std::vector<bool> seen(normalized.num_nodes(), false);
  std::vector<NodeId> stack = {start};
  seen[start] = true;
  int count = 0;
  while (!stack.empty()) {
    NodeId current = stack.back();
    stack.pop_back();
    ++count;
    for (const Edge &e : normalized.edges()) {
      if (e.source == current && !seen[e.target]) {
        seen[e.target] = true;
        stack.push_back(e.target);
      }
    }
  }
  return count;
}

// Best top node among `candidates`: parentless variables first, then by
// reach, then lowest id.
NodeId PickTop(const AmrGraph &normalized,
               const std::vector<NodeId> &candidates) {
  NodeId best = kNoNode;
  std::tuple<int, int, int> best_key{-1, -1, 0};
  for (NodeId id : candidates) {
    const Node &node = normalized.node(id);
    if (!node.is_variable()) continue;
    int parentless = normalized.InDegree(id) == 0 ? 1 : 0;
    std::tuple<int, int, int> key{parentless, Reach(normalized, id), -id};
    if (key > best_key) {
      best_key = key;
      best = id;
    }
  }
  if (best == kNoNode && !candidates.empty()) {
    best = *std::min_element(candidates.begin(), candidates.end());
  }
  return best;
}

}  // namespace

AmrGraph BuildGraph(const Configuration &config, BuildStats *stats) {
  BuildStats local;
  const AmrGraph &built = config.graph();

  // Copy, giving every extra incoming edge of a constant its own copy.
  AmrGraph graph;
  for (const Node &node : built.nodes()) {
    if (node.is_variable()) {
      graph.AddVariable(node.variable, node.label);
    } else {
      graph.AddConstant(node.label, node.quoted);
    }
  }
  std::vector<bool> constant_used(built.num_nodes(), false);
  for (const Edge &e : built.edges()) {
    NodeId target = e.target;
    if (built.node(target).is_constant()) {
      if (constant_used[target]) {
        target = graph.AddConstant(built.node(target).label,
                                   built.node(target).quoted);
        ++local.constants_split;
      }
      constant_used[e.target] = true;
    }
    graph.AddEdge(e.source, target, e.label);
  }

  if (graph.num_variables() == 0) {
    NodeId root = graph.AddVariable(graph.FreshVariable("amr-empty"),
                                    "amr-empty");
    graph.set_root(root);
  } else if (config.designated_root() != kNoNode &&
             graph.node(config.designated_root()).is_variable()) {
    graph.set_root(config.designated_root());
  } else {
    AmrGraph normalized = NormalizeInverseEdges(graph);
    std::vector<NodeId> all(graph.num_nodes());
    for (NodeId id = 0; id < static_cast<NodeId>(all.size()); ++id) all[id] = id;
    graph.set_root(PickTop(normalized, all));
  }
  local.root_fallback = graph.root() != config.designated_root();

  // Weakly connected components; attach every one without the root.
  const int n = static_cast<int>(graph.num_nodes());
  std::vector<int> component(n, -1);
  int count = 0;
  for (NodeId start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    std::vector<NodeId> stack = {start};
    component[start] = count;
    while (!stack.empty()) {
      NodeId current = stack.back();
      stack.pop_back();
      for (const Edge &e : graph.edges()) {
        NodeId other = e.source == current   ? e.target
                       : e.target == current ? e.source
                                             : kNoNode;
        if (other != kNoNode && component[other] < 0) {
          component[other] = count;
          stack.push_back(other);
        }
      }
    }
    ++count;
  }
  const int root_component = component[graph.root()];
  const AmrGraph normalized = NormalizeInverseEdges(graph);
  for (int c = 0; c < count; ++c) {
    if (c == root_component) continue;
    std::vector<NodeId> members;
    for (NodeId id = 0; id < n; ++id) {
      if (component[id] == c) members.push_back(id);
    }
    graph.AddEdge(graph.root(), PickTop(normalized, members), ":mod");
    ++local.stranded_repairs;
  }
  if (stats != nullptr) *stats = local;
  return graph;
}

std::string FormatFragment(const AmrGraph &fragment) {
  if (fragment.empty()) return "";
  NodeId root = fragment.has_root() ? fragment.root() : 0;
  const Node &node = fragment.node(root);
  if (node.is_constant()) return FormatAtom(node.label, node.quoted);
  return SerializePenman(fragment);
}

AmrGraph ParseFragment(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text[0]))) {
    text.remove_prefix(1);
  }
  if (text.empty()) return AmrGraph();
  if (text[0] == '(') return ParsePenman(text);
  while (std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  AmrGraph fragment;
  if (text[0] != '"') {
    fragment.set_root(fragment.AddConstant(std::string(text), false));
    return fragment;
  }
  std::string value;
  for (size_t i = 1; i < text.size(); ++i) {
    if (text[i] == '"') break;
    if (text[i] == '\\' && i + 1 < text.size()) ++i;
    value.push_back(text[i]);
  }
  fragment.set_root(fragment.AddConstant(std::move(value), true));
  return fragment;
}

TokenFragments ExtractFragments(const AmrGraph &normalized,
                                const Alignment &alignment, int num_tokens) {
  const int n = static_cast<int>(normalized.num_nodes());
  TokenFragments result;
  result.nodes.assign(num_tokens, {});
  result.root.assign(num_tokens, kNoNode);
  result.owner.assign(n, -1);

  std::vector<int> aligned_to(n, -1);
  for (const auto &[node, token] : alignment.pairs()) {
    if (node >= 0 && node < n && token >= 0 && token < num_tokens) {
      aligned_to[node] = token;
    }
  }
  // Depth from the gold root, for choosing among several parentless nodes.
  std::vector<int> depth(n, 1 << 20);
  if (normalized.has_root()) {
    std::deque<NodeId> queue = {normalized.root()};
    depth[normalized.root()] = 0;
    while (!queue.empty()) {
      NodeId current = queue.front();
      queue.pop_front();
      for (const Edge &e : normalized.edges()) {
        if (e.source == current && depth[e.target] > depth[current] + 1) {
          depth[e.target] = depth[current] + 1;
          queue.push_back(e.target);
        }
      }
    }
  }

  for (int token = 0; token < num_tokens; ++token) {
    std::vector<NodeId> aligned;
    for (NodeId id = 0; id < n; ++id) {
      if (aligned_to[id] == token && result.owner[id] < 0) aligned.push_back(id);
    }
    if (aligned.empty()) continue;
    auto in_set = [&](NodeId id) {
      return std::find(aligned.begin(), aligned.end(), id) != aligned.end();
    };
    NodeId root = kNoNode;
    for (NodeId id : aligned) {
      bool has_parent = std::any_of(
          normalized.edges().begin(), normalized.edges().end(),
          [&](const Edge &e) { return e.target == id && in_set(e.source); });
      if (has_parent) continue;
      if (root == kNoNode || std::tie(depth[id], id) < std::tie(depth[root], root)) {
        root = id;
      }
    }
    if (root == kNoNode) root = aligned.front();  // aligned nodes form a cycle
    // Grow from the root through this token's nodes and unaligned nodes.
    std::vector<NodeId> members = {root};
    result.owner[root] = token;
    for (size_t i = 0; i < members.size(); ++i) {
      for (const Edge &e : normalized.edges()) {
        if (e.source != members[i]) continue;
        NodeId child = e.target;
        if (result.owner[child] >= 0) continue;
        if (aligned_to[child] != token && aligned_to[child] != -1) continue;
        result.owner[child] = token;
        members.push_back(child);
      }
    }
    result.nodes[token] = std::move(members);
    result.root[token] = root;
  }
  return result;
}

AmrGraph FragmentGraph(const AmrGraph &normalized,
                       const std::vector<NodeId> &nodes, NodeId root) {
  AmrGraph fragment;
  std::map<NodeId, NodeId> mapping;
  for (NodeId id : nodes) {
    const Node &node = normalized.node(id);
    if (node.is_variable()) {
      mapping[id] =
          fragment.AddVariable(fragment.FreshVariable(node.label), node.label);
    } else {
      mapping[id] = fragment.AddConstant(node.label, node.quoted);
    }
  }
  for (const Edge &e : normalized.edges()) {
    auto s = mapping.find(e.source);
    auto t = mapping.find(e.target);
    if (s != mapping.end() && t != mapping.end()) {
      fragment.AddEdge(s->second, t->second, e.label);
    }
  }
  fragment.set_root(mapping.at(root));
  return fragment;
}

bool IsStopword(const Token &token) {
  static const std::set<std::string> kStopwords = {
      "a",    "an",    "the",  "be",   "is",   "am",  "are",  "was",
      "were", "been",  "being", "do",  "does", "did", "to",   "'s",
      "will", "would", "shall", "of",  "that", "'ll", "'d",   "'re",
      "'m"};
  const std::string surface = Lowercase(token.surface);
  if (kStopwords.count(surface) || kStopwords.count(Lowercase(token.lemma))) {
    return true;
  }
  if (token.pos == "PUNCT" || token.pos == "." || token.pos == "," ||
      token.pos == ":") {
    return true;
  }
  return !surface.empty() &&
         std::all_of(surface.begin(), surface.end(), [](char c) {
           return std::ispunct(static_cast<unsigned char>(c));
         });
}

void ConceptTable::Add(const std::string &lemma, const std::string &fragment,
                       int count) {
  entries_[lemma][fragment] += count;
}

std::optional<std::string> ConceptTable::Find(const std::string &lemma) const {
  auto it = entries_.find(lemma);
  if (it == entries_.end() || it->second.empty()) return std::nullopt;
  const std::string *best = nullptr;
  int best_count = -1;
  for (const auto &[fragment, count] : it->second) {
    if (count > best_count) {
      best = &fragment;
      best_count = count;
    }
  }
  return *best;
}

AmrGraph ConceptTable::Lookup(const Token &token) const {
  const std::string lemma = Lowercase(token.lemma.empty() ? token.surface
                                                          : token.lemma);
  if (auto hit = Find(lemma)) return ParseFragment(*hit);
  if (IsStopword(token)) return AmrGraph();
  if (token.ner != "O" && !token.ner.empty()) {
    static const std::map<std::string, std::string> kEntityKind = {
        {"PER", "person"}, {"ORG", "organization"}, {"LOC", "city"},
        {"MISC", "thing"}};
    auto kind = kEntityKind.find(token.ner);
    AmrGraph fragment;
    const std::string &label =
        kind == kEntityKind.end() ? std::string("thing") : kind->second;
    NodeId entity = fragment.AddVariable(fragment.FreshVariable(label), label);
    NodeId name = fragment.AddVariable("n", "name");
    NodeId op = fragment.AddConstant(token.surface, true);
    fragment.AddEdge(entity, name, ":name");
    fragment.AddEdge(name, op, ":op1");
    fragment.set_root(entity);
    return fragment;
  }
  if (ParseNumber(token.surface)) {
    AmrGraph fragment;
    fragment.set_root(fragment.AddConstant(token.surface, false));
    return fragment;
  }
  AmrGraph fragment;
  std::string label = lemma;
  if (token.pos.starts_with("VB") || token.pos == "VERB") label += "-01";
  fragment.set_root(fragment.AddVariable(fragment.FreshVariable(label), label));
  return fragment;
}

std::string ConceptTable::ToText() const {
  struct Row {
    std::string lemma;
    int count;
    std::string fragment;
  };
  std::vector<Row> rows;
  for (const auto &[lemma, fragments] : entries_) {
    for (const auto &[fragment, count] : fragments) {
      rows.push_back({lemma, count, fragment});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row &a, const Row &b) {
    return std::make_tuple(a.lemma, -a.count, a.fragment) <
           std::make_tuple(b.lemma, -b.count, b.fragment);
  });
  std::string out;
  for (const Row &row : rows) {
    out += row.lemma + "\t" + std::to_string(row.count) + "\t" + row.fragment +
           "\n";
  }
  return out;
}

ConceptTable ConceptTable::FromText(std::string_view text) {
  ConceptTable table;
  int line_number = 0;
  for (const std::string &line : Split(text, '\n')) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields = Split(line, '\t');
    std::optional<double> count =
        fields.size() == 3 ? ParseNumber(fields[1]) : std::nullopt;
    if (!count) {
      throw DataError("concept table line " + std::to_string(line_number) +
                      ": expected 'lemma<TAB>count<TAB>fragment'");
    }
    table.Add(fields[0], fields[2], static_cast<int>(*count));
  }
  return table;
}

ConceptTable BuildConceptTable(std::span<const AnnotatedExample> examples) {
  ConceptTable table;
  for (const AnnotatedExample &example : examples) {
    const AmrGraph normalized = NormalizeInverseEdges(example.graph);
    const int num_tokens = static_cast<int>(example.sentence.tokens.size());
    TokenFragments fragments =
        ExtractFragments(normalized, example.alignment, num_tokens);
    for (int t = 0; t < num_tokens; ++t) {
      if (fragments.root[t] == kNoNode) continue;
      const Token &token = example.sentence.tokens[t];
      table.Add(Lowercase(token.lemma.empty() ? token.surface : token.lemma),
                FormatFragment(FragmentGraph(normalized, fragments.nodes[t],
                                             fragments.root[t])));
    }
  }
  return table;
}

}  // namespace amreager
