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

#include "amreager/aligner.h"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

#include "amreager/strings.h"

namespace amreager {

namespace {

constexpr int kPrefixLength = 4;

// A rule match: all `nodes` align to `token`.
struct Candidate {
  int token;
  int depth;
  std::vector<NodeId> nodes;
};

std::vector<int> NodeDepths(const AmrGraph &graph) {
  const AmrGraph normalized = NormalizeInverseEdges(graph);
  std::vector<int> depth(graph.num_nodes(), 1 << 20);
  if (!normalized.has_root()) return depth;
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
  return depth;
}

size_t CommonPrefix(std::string_view a, std::string_view b) {
  size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

// Takes candidates leftmost token first, then shallowest node, skipping
// tokens already used by this rule and nodes already aligned.
void Apply(std::vector<Candidate> candidates, Alignment &alignment) {
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              return std::tie(a.token, a.depth, a.nodes) <
                     std::tie(b.token, b.depth, b.nodes);
            });
  std::set<int> used;
  for (const Candidate &c : candidates) {
    if (used.count(c.token)) continue;
    bool free = std::none_of(c.nodes.begin(), c.nodes.end(), [&](NodeId n) {
      return alignment.TokenOf(n).has_value();
    });
    if (!free) continue;
    for (NodeId n : c.nodes) alignment.Add(n, c.token);
    used.insert(c.token);
  }
}

}  // namespace

Alignment Align(const TokenizedSentence &sentence, const AmrGraph &graph) {
  Alignment alignment;
  const std::vector<int> depth = NodeDepths(graph);
  const auto &tokens = sentence.tokens;
  std::vector<std::string> surface, lemma;
  for (const Token &t : tokens) {
    surface.push_back(Lowercase(t.surface));
    lemma.push_back(Lowercase(t.lemma));
  }

  // 1. Exact concept match.
  {
    std::vector<Candidate> candidates;
    for (const Node &node : graph.nodes()) {
      if (!node.is_variable()) continue;
      std::string concept_label = Lowercase(StripSenseSuffix(node.label));
      for (size_t t = 0; t < tokens.size(); ++t) {
        if (concept_label == surface[t] || concept_label == lemma[t]) {
          candidates.push_back({static_cast<int>(t), depth[node.id], {node.id}});
        }
      }
    }
    Apply(std::move(candidates), alignment);
  }

  // 2. Shared prefix.
  {
    std::vector<Candidate> candidates;
    for (const Node &node : graph.nodes()) {
      if (!node.is_variable()) continue;
      std::string concept_label = Lowercase(StripSenseSuffix(node.label));
      for (size_t t = 0; t < tokens.size(); ++t) {
        if (CommonPrefix(concept_label, surface[t]) >= kPrefixLength ||
            CommonPrefix(concept_label, lemma[t]) >= kPrefixLength) {
          candidates.push_back({static_cast<int>(t), depth[node.id], {node.id}});
        }
      }
    }
    Apply(std::move(candidates), alignment);
  }

  // 3. Named entities.
  {
    std::vector<Candidate> candidates;
    for (const Edge &name_edge : graph.edges()) {
      if (name_edge.label != ":name") continue;
      const NodeId entity = name_edge.source;
      const NodeId name = name_edge.target;
      if (!graph.node(name).is_variable()) continue;
      std::vector<std::pair<int, NodeId>> ops;
      for (const Edge &e : graph.edges()) {
        if (e.source != name || !e.label.starts_with(":op")) continue;
        if (!graph.node(e.target).is_constant()) continue;
        int k = 0;
        try {
          k = std::stoi(e.label.substr(3));
        } catch (const std::exception &) {
          continue;
        }
        ops.emplace_back(k, e.target);
      }
      if (ops.empty()) continue;
      std::sort(ops.begin(), ops.end());
      for (size_t start = 0; start + ops.size() <= tokens.size(); ++start) {
        bool match = true;
        for (size_t i = 0; i < ops.size() && match; ++i) {
          match = Lowercase(graph.node(ops[i].second).label) ==
                  surface[start + i];
        }
        if (!match) continue;
        Candidate c{static_cast<int>(start), depth[entity], {entity, name}};
        for (const auto &op : ops) c.nodes.push_back(op.second);
        std::sort(c.nodes.begin(), c.nodes.end());
        candidates.push_back(std::move(c));
      }
    }
    Apply(std::move(candidates), alignment);
  }

  // 4. Negation.
  {
    static const std::set<std::string> kNegations = {"not", "no", "never",
                                                     "n't", "without"};
    std::vector<Candidate> candidates;
    for (const Edge &e : graph.edges()) {
      if (e.label != ":polarity" || graph.node(e.target).label != "-") continue;
      for (size_t t = 0; t < tokens.size(); ++t) {
        if (kNegations.count(surface[t]) || kNegations.count(lemma[t])) {
          candidates.push_back({static_cast<int>(t), depth[e.target], {e.target}});
        }
      }
    }
    Apply(std::move(candidates), alignment);
  }

  // 5. Numbers.
  {
    std::vector<Candidate> candidates;
    for (const Node &node : graph.nodes()) {
      if (!node.is_constant()) continue;
      auto value = ParseNumber(node.label);
      if (!value) continue;
      for (size_t t = 0; t < tokens.size(); ++t) {
        auto token_value = ParseNumber(tokens[t].surface);
        if (token_value && *token_value == *value) {
          candidates.push_back({static_cast<int>(t), depth[node.id], {node.id}});
        }
      }
    }
    Apply(std::move(candidates), alignment);
  }
  return alignment;
}

double AlignmentCoverage(const Alignment &alignment, const AmrGraph &graph) {
  if (graph.empty()) return 0.0;
  std::set<NodeId> aligned;
  for (const auto &[node, token] : alignment.pairs()) {
    if (node >= 0 && node < static_cast<NodeId>(graph.num_nodes())) {
      aligned.insert(node);
    }
  }
  return static_cast<double>(aligned.size()) /
         static_cast<double>(graph.num_nodes());
}

}  // namespace amreager
