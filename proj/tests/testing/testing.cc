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

#include "testing/testing.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "amreager/errors.h"

namespace amreager::testing {

namespace {

const char *const kConcepts[] = {"want-01", "dog",    "eat-01", "person",
                                 "name",    "big",    "go-02",  "cat",
                                 "and",     "boy",    "see-01", "girl"};
const char *const kRelations[] = {":ARG0", ":ARG1", ":ARG2", ":mod",
                                  ":domain", ":op1", ":consist-of", ":time"};

struct Constant {
  const char *label;
  const char *value;
  bool quoted;
};
const Constant kConstants[] = {{":polarity", "-", false},
                               {":quant", "5", false},
                               {":value", "2.5", false},
                               {":op1", "Mary", true},
                               {":wiki", "New York", true},
                               {":mode", "imperative", false}};

template <typename T, size_t N>
const T &Pick(std::mt19937_64 &rng, const T (&items)[N]) {
  return items[std::uniform_int_distribution<size_t>(0, N - 1)(rng)];
}

bool Chance(std::mt19937_64 &rng, double p) {
  return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

using EdgeKey = std::tuple<NodeId, std::string, NodeId, std::string, bool>;

// Edges as (source, label, target variable or -1, constant value, quoted)
// with variable endpoints renumbered by `map`.
std::vector<EdgeKey> EdgeKeys(const AmrGraph &g, const std::vector<NodeId> &map) {
  std::vector<EdgeKey> keys;
  for (const Edge &e : g.edges()) {
    const Node &t = g.node(e.target);
    if (t.is_variable()) {
      keys.emplace_back(map[e.source], e.label, map[e.target], "", false);
    } else {
      keys.emplace_back(map[e.source], e.label, -1, t.label, t.quoted);
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

bool IsVariableTerm(const Triple &t, bool object) {
  return object ? t.kind == TripleKind::kRelation : true;
}

}  // namespace

AmrGraph RandomGraph(std::mt19937_64 &rng, const RandomGraphOptions &options) {
  AmrGraph g;
  const int n = std::uniform_int_distribution<int>(options.min_variables,
                                                   options.max_variables)(rng);
  std::vector<NodeId> vars;
  for (int i = 0; i < n; ++i) {
    const std::string concept_label = Pick(rng, kConcepts);
    vars.push_back(g.AddVariable(g.FreshVariable(concept_label), concept_label));
  }
  g.set_root(vars[0]);
  for (int i = 1; i < n; ++i) {
    const NodeId parent = vars[std::uniform_int_distribution<int>(0, i - 1)(rng)];
    const std::string label = Pick(rng, kRelations);
    if (Chance(rng, options.inverted)) {
      g.AddEdge(vars[i], parent, label);
    } else {
      g.AddEdge(parent, vars[i], label);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (n > 1 && Chance(rng, options.reentrancy)) {
      const NodeId target = vars[std::uniform_int_distribution<int>(0, n - 1)(rng)];
      if (target != vars[i]) g.AddEdge(vars[i], target, Pick(rng, kRelations));
    }
    if (Chance(rng, options.constant)) {
      const Constant &c = Pick(rng, kConstants);
      g.AddEdge(vars[i], g.AddConstant(c.value, c.quoted), c.label);
    }
  }
  g.Validate();
  return g;
}

Action RandomLegalAction(std::mt19937_64 &rng, const Configuration &config) {
  const std::vector<ActionKind> legal = LegalActions(config);
  const ActionKind kind =
      legal[std::uniform_int_distribution<size_t>(0, legal.size() - 1)(rng)];
  switch (kind) {
    case ActionKind::kShift: {
      AmrGraph fragment;
      switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0:
          break;
        case 1: {
          const Constant &c = Pick(rng, kConstants);
          fragment.set_root(fragment.AddConstant(c.value, c.quoted));
          break;
        }
        case 2: {
          const std::string label = Pick(rng, kConcepts);
          fragment.set_root(fragment.AddVariable("x", label));
          break;
        }
        default: {
          const NodeId p = fragment.AddVariable("p", "person");
          const NodeId n = fragment.AddVariable("n", "name");
          fragment.AddEdge(p, n, ":name");
          fragment.AddEdge(n, fragment.AddConstant("Mary", true), ":op1");
          fragment.set_root(p);
        }
      }
      return Action::Shift(std::move(fragment));
    }
    case ActionKind::kLeftArc:
      return Action::LeftArc(Pick(rng, kRelations));
    case ActionKind::kRightArc:
      return Action::RightArc(Pick(rng, kRelations));
    case ActionKind::kReduce:
      return Action::Reduce(Chance(rng, 0.5), Pick(rng, kRelations));
  }
  return Action::Reduce();
}

bool Isomorphic(const AmrGraph &raw_a, const AmrGraph &raw_b) {
  const AmrGraph a = NormalizeInverseEdges(raw_a);
  const AmrGraph b = NormalizeInverseEdges(raw_b);
  if (a.num_variables() != b.num_variables() ||
      a.num_nodes() != b.num_nodes() || a.edges().size() != b.edges().size()) {
    return false;
  }
  std::vector<NodeId> va, vb;
  for (const Node &n : a.nodes()) if (n.is_variable()) va.push_back(n.id);
  for (const Node &n : b.nodes()) if (n.is_variable()) vb.push_back(n.id);

  std::vector<NodeId> identity(b.num_nodes(), -1);
  for (size_t k = 0; k < vb.size(); ++k) identity[vb[k]] = static_cast<NodeId>(k);
  const std::vector<EdgeKey> target = EdgeKeys(b, identity);

  std::vector<NodeId> map(a.num_nodes(), -1);
  std::vector<bool> used(vb.size(), false);
  std::function<bool(size_t)> search = [&](size_t i) -> bool {
    if (i == va.size()) {
      if (map[a.root()] != identity[b.root()]) return false;
      return EdgeKeys(a, map) == target;
    }
    for (size_t k = 0; k < vb.size(); ++k) {
      if (used[k] || a.node(va[i]).label != b.node(vb[k]).label) continue;
      used[k] = true;
      map[va[i]] = static_cast<NodeId>(k);
      if (search(i + 1)) return true;
      used[k] = false;
    }
    map[va[i]] = -1;
    return false;
  };
  return search(0);
}

long BruteForceMatches(std::span<const Triple> a, std::span<const Triple> b) {
  std::vector<std::string> va, vb;
  auto collect = [](std::span<const Triple> triples, std::vector<std::string> &out) {
    for (const Triple &t : triples) {
      out.push_back(t.subject);
      if (IsVariableTerm(t, true)) out.push_back(t.object);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  };
  collect(a, va);
  collect(b, vb);
  if (va.size() > 9 || vb.size() > 9) throw std::invalid_argument("too large");

  std::multiset<std::tuple<int, std::string, std::string, std::string>> target;
  for (const Triple &t : b) target.emplace(static_cast<int>(t.kind), t.subject,
                                           t.predicate, t.object);
  std::map<std::string, std::string> map;
  long best = 0;
  std::vector<bool> used(vb.size(), false);
  std::function<void(size_t)> search = [&](size_t i) {
    if (i == va.size()) {
      auto remaining = target;
      long matched = 0;
      for (const Triple &t : a) {
        auto s = map.find(t.subject);
        if (s == map.end()) continue;
        std::string object = t.object;
        if (IsVariableTerm(t, true)) {
          auto o = map.find(t.object);
          if (o == map.end()) continue;
          object = o->second;
        }
        auto it = remaining.find({static_cast<int>(t.kind), s->second,
                                  t.predicate, object});
        if (it != remaining.end()) {
          remaining.erase(it);
          ++matched;
        }
      }
      best = std::max(best, matched);
      return;
    }
    search(i + 1);  // leave va[i] unmapped
    for (size_t k = 0; k < vb.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      map[va[i]] = vb[k];
      search(i + 1);
      map.erase(va[i]);
      used[k] = false;
    }
  };
  search(0);
  return best;
}

std::filesystem::path SourcePath(const std::string &relative) {
  return std::filesystem::path(AMREAGER_SOURCE_DIR) / relative;
}

std::vector<AnnotatedExample> ToyCorpus(const std::string &split) {
  const AmrBank bank = LoadAmrFile(SourcePath("data/toy/" + split + ".amr"));
  if (!bank.errors.empty()) throw DataError(bank.errors.front().ToString());
  ZipResult zipped =
      ZipExamples(bank.records, LoadConllu(SourcePath("data/toy/" + split + ".conllu")),
                  {});
  if (!zipped.errors.empty()) throw DataError(zipped.errors.front());
  return std::move(zipped.examples);
}

AnnotatedExample ToyExample(const std::string &id) {
  for (const char *split : {"train", "dev"}) {
    for (AnnotatedExample &ex : ToyCorpus(split)) {
      if (ex.id == id) return std::move(ex);
    }
  }
  throw std::invalid_argument("no toy example " + id);
}

std::filesystem::path TempDir(const std::string &name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("amreager_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace amreager::testing
