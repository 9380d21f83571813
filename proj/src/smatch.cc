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

#include "amreager/smatch.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

#include "amreager/strings.h"

namespace amreager {

SmatchResult SmatchResult::FromCounts(long matched, long total_a,
                                      long total_b) {
  SmatchResult r;
  r.matched = matched;
  r.total_a = total_a;
  r.total_b = total_b;
  if (total_a == 0 && total_b == 0) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  r.precision = total_a > 0 ? static_cast<double>(matched) / total_a : 0.0;
  r.recall = total_b > 0 ? static_cast<double>(matched) / total_b : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

SmatchResult &SmatchResult::operator+=(const SmatchResult &other) {
  *this = FromCounts(matched + other.matched, total_a + other.total_a,
                     total_b + other.total_b);
  return *this;
}

namespace {

// Triples of one side with variables and strings interned.
struct Encoded {
  int subject;
  int predicate;
  int object;
  bool object_is_variable;
};

class MatchProblem {
 public:
  MatchProblem(std::span<const Triple> a, std::span<const Triple> b) {
    a_vars_ = CollectVariables(a);
    b_vars_ = CollectVariables(b);
    a_ = Encode(a, a_vars_);
    std::vector<Encoded> encoded_b = Encode(b, b_vars_);
    for (const Encoded &t : encoded_b) ++b_counts_[Key(t)];
    total_a_ = static_cast<long>(a.size());
    total_b_ = static_cast<long>(b.size());
    // Concept of each variable, for the seeded first restart.
    a_concept_.assign(a_vars_.size(), -1);
    b_concept_.assign(b_vars_.size(), -1);
    for (const Encoded &t : a_) {
      if (t.predicate == instance_) a_concept_[t.subject] = t.object;
    }
    for (const Encoded &t : encoded_b) {
      if (t.predicate == instance_) b_concept_[t.subject] = t.object;
    }
    // B variables each A variable could share at least one triple with.
    std::vector<std::set<int>> candidates(a_vars_.size());
    for (const Encoded &x : a_) {
      for (const Encoded &y : encoded_b) {
        if (x.predicate != y.predicate ||
            x.object_is_variable != y.object_is_variable) {
          continue;
        }
        if (!x.object_is_variable) {
          if (x.object == y.object) candidates[x.subject].insert(y.subject);
          continue;
        }
        candidates[x.subject].insert(y.subject);
        candidates[x.object].insert(y.object);
      }
    }
    for (const std::set<int> &c : candidates) {
      candidates_.emplace_back(c.begin(), c.end());
    }
  }

  int num_a() const { return static_cast<int>(a_vars_.size()); }
  int num_b() const { return static_cast<int>(b_vars_.size()); }
  long total_a() const { return total_a_; }
  long total_b() const { return total_b_; }
  int a_concept(int i) const { return a_concept_[i]; }
  int b_concept(int j) const { return b_concept_[j]; }
  const std::vector<int> &candidates(int i) const { return candidates_[i]; }

  // Matched triples under `mapping` (A variable -> B variable or -1).
  long Score(const std::vector<int> &mapping) const {
    keys_.clear();
    for (const Encoded &t : a_) {
      int subject = mapping[t.subject];
      if (subject < 0) continue;
      Encoded mapped = t;
      mapped.subject = subject;
      if (t.object_is_variable) {
        mapped.object = mapping[t.object];
        if (mapped.object < 0) continue;
      }
      keys_.push_back(Key(mapped));
    }
    std::sort(keys_.begin(), keys_.end());
    long matched = 0;
    for (size_t i = 0; i < keys_.size();) {
      size_t j = i;
      while (j < keys_.size() && keys_[j] == keys_[i]) ++j;
      auto it = b_counts_.find(keys_[i]);
      if (it != b_counts_.end()) {
        matched += std::min<long>(static_cast<long>(j - i), it->second);
      }
      i = j;
    }
    return matched;
  }

 private:
  static uint64_t Key(const Encoded &t) {
    return (static_cast<uint64_t>(t.subject) << 48) ^
           (static_cast<uint64_t>(t.predicate) << 28) ^
           (static_cast<uint64_t>(t.object) << 1) ^
           (t.object_is_variable ? 1u : 0u);
  }

  std::map<std::string, int> CollectVariables(std::span<const Triple> triples) {
    std::map<std::string, int> vars;
    auto add = [&vars](const std::string &v) {
      vars.emplace(v, static_cast<int>(vars.size()));
    };
    for (const Triple &t : triples) {
      add(t.subject);
      if (t.kind == TripleKind::kRelation) add(t.object);
    }
    return vars;
  }

  int Intern(const std::string &s) {
    auto [it, inserted] = strings_.emplace(s, static_cast<int>(strings_.size()));
    return it->second;
  }

  std::vector<Encoded> Encode(std::span<const Triple> triples,
                              const std::map<std::string, int> &vars) {
    instance_ = Intern("instance");
    std::vector<Encoded> out;
    for (const Triple &t : triples) {
      Encoded e;
      e.subject = vars.at(t.subject);
      e.predicate = Intern(t.predicate);
      e.object_is_variable = t.kind == TripleKind::kRelation;
      e.object = e.object_is_variable ? vars.at(t.object) : Intern(t.object);
      out.push_back(e);
    }
    return out;
  }

  std::map<std::string, int> a_vars_, b_vars_;
  std::map<std::string, int> strings_;
  int instance_ = 0;
  std::vector<Encoded> a_;
  std::unordered_map<uint64_t, long> b_counts_;
  std::vector<int> a_concept_, b_concept_;
  std::vector<std::vector<int>> candidates_;
  long total_a_ = 0, total_b_ = 0;
  mutable std::vector<uint64_t> keys_;
};

// Steepest ascent from `mapping` over reassignments and swaps.
long Climb(const MatchProblem &problem, std::vector<int> &mapping) {
  const int na = problem.num_a();
  const int nb = problem.num_b();
  std::vector<int> owner(nb, -1);
  for (int i = 0; i < na; ++i) {
    if (mapping[i] >= 0) owner[mapping[i]] = i;
  }
  long score = problem.Score(mapping);
  while (true) {
    long best = score;
    int best_i = -1, best_j = -1;
    for (int i = 0; i < na; ++i) {
      for (int j = 0; j < nb; ++j) {
        if (mapping[i] == j) continue;
        const int k = owner[j];
        const int old = mapping[i];
        mapping[i] = j;
        if (k >= 0) mapping[k] = old;
        long candidate = problem.Score(mapping);
        mapping[i] = old;
        if (k >= 0) mapping[k] = j;
        if (candidate > best) {
          best = candidate;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i < 0) return score;
    const int k = owner[best_j];
    const int old = mapping[best_i];
    mapping[best_i] = best_j;
    owner[best_j] = best_i;
    if (k >= 0) {
      mapping[k] = old;
      if (old >= 0) owner[old] = k;
    } else if (old >= 0) {
      owner[old] = -1;
    }
    score = best;
  }
}

std::vector<int> SeededMapping(const MatchProblem &problem, std::mt19937_64 &rng) {
  const int na = problem.num_a();
  const int nb = problem.num_b();
  std::vector<int> mapping(na, -1);
  std::vector<bool> used(nb, false);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      if (!used[j] && problem.a_concept(i) >= 0 &&
          problem.a_concept(i) == problem.b_concept(j)) {
        mapping[i] = j;
        used[j] = true;
        break;
      }
    }
  }
  std::vector<int> free;
  for (int j = 0; j < nb; ++j) {
    if (!used[j]) free.push_back(j);
  }
  std::shuffle(free.begin(), free.end(), rng);
  for (int i = 0; i < na && !free.empty(); ++i) {
    if (mapping[i] < 0) {
      mapping[i] = free.back();
      free.pop_back();
    }
  }
  return mapping;
}

// Each A variable, in random order, takes a random unused candidate or
// stays unmapped.
std::vector<int> RandomMapping(const MatchProblem &problem, std::mt19937_64 &rng) {
  const int na = problem.num_a();
  std::vector<int> order(na);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> mapping(na, -1);
  std::vector<bool> used(problem.num_b(), false);
  for (int i : order) {
    std::vector<int> open;
    for (int j : problem.candidates(i)) {
      if (!used[j]) open.push_back(j);
    }
    if (open.empty()) continue;
    const int j = open[std::uniform_int_distribution<size_t>(0, open.size() - 1)(rng)];
    mapping[i] = j;
    used[j] = true;
  }
  return mapping;
}

void Enumerate(const MatchProblem &problem, std::vector<int> &mapping,
               std::vector<bool> &used, int i, long *best) {
  if (i == problem.num_a()) {
    *best = std::max(*best, problem.Score(mapping));
    return;
  }
  mapping[i] = -1;
  Enumerate(problem, mapping, used, i + 1, best);
  for (int j = 0; j < problem.num_b(); ++j) {
    if (used[j]) continue;
    used[j] = true;
    mapping[i] = j;
    Enumerate(problem, mapping, used, i + 1, best);
    used[j] = false;
  }
  mapping[i] = -1;
}

std::vector<Triple> Canonical(std::vector<Triple> triples) {
  for (Triple &t : triples) {
    if (t.kind == TripleKind::kInstance) {
      t.object = Lowercase(t.object);
    } else if (t.kind == TripleKind::kAttribute) {
      t.object = CanonicalNumber(t.object);
      t.quoted = false;
    }
  }
  return triples;
}

SmatchResult MultisetF1(const std::vector<std::string> &a,
                        const std::vector<std::string> &b) {
  std::map<std::string, long> counts_b;
  for (const std::string &s : b) ++counts_b[s];
  long matched = 0;
  for (const std::string &s : a) {
    auto it = counts_b.find(s);
    if (it != counts_b.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return SmatchResult::FromCounts(matched, static_cast<long>(a.size()),
                                  static_cast<long>(b.size()));
}

struct MetricView {
  std::vector<Triple> all;
  std::vector<Triple> unlabeled;
  std::vector<Triple> no_wsd;
  std::vector<Triple> reentrancy;
  std::vector<Triple> named_entities;
  std::vector<Triple> srl;
  std::vector<std::string> concepts;
  std::vector<std::string> wiki;
  std::vector<std::string> negations;
};

MetricView BuildView(const AmrGraph &graph) {
  static const std::regex kArg(":ARG[0-9]+");
  MetricView view;
  const AmrGraph g = NormalizeInverseEdges(graph);
  view.all = ScoringTriples(graph);
  for (Triple t : view.all) {
    if (t.kind == TripleKind::kRelation) t.predicate = "rel";
    view.unlabeled.push_back(t);
  }
  for (Triple t : view.all) {
    if (t.kind == TripleKind::kInstance) t.object = StripSenseSuffix(t.object);
    view.no_wsd.push_back(t);
  }
  auto instance = [&g](NodeId id) {
    const Node &n = g.node(id);
    return Triple{TripleKind::kInstance, n.variable, "instance",
                  Lowercase(n.label), false};
  };
  auto edge_triple = [&g](const Edge &e) {
    const Node &target = g.node(e.target);
    if (target.is_constant()) {
      return Triple{TripleKind::kAttribute, g.node(e.source).variable,
                    e.label.substr(1), CanonicalNumber(target.label), false};
    }
    return Triple{TripleKind::kRelation, g.node(e.source).variable,
                  e.label.substr(1), target.variable, false};
  };

  for (const Node &n : g.nodes()) {
    if (n.is_variable()) view.concepts.push_back(Lowercase(n.label));
  }

  // Reentrancy: edges into reentrant nodes with their endpoint instances.
  {
    std::set<NodeId> nodes;
    for (NodeId r : g.ReentrantNodes()) {
      for (const Edge &e : g.edges()) {
        if (e.target != r) continue;
        nodes.insert(e.source);
        nodes.insert(r);
        view.reentrancy.push_back(edge_triple(e));
      }
    }
    for (NodeId id : nodes) view.reentrancy.push_back(instance(id));
  }

  // Named entities.
  {
    std::set<NodeId> nodes;
    for (const Edge &e : g.edges()) {
      if (e.label != ":name" || !g.node(e.target).is_variable()) continue;
      nodes.insert(e.source);
      nodes.insert(e.target);
      view.named_entities.push_back(edge_triple(e));
      for (const Edge &op : g.edges()) {
        if (op.source == e.target && g.node(op.target).is_constant()) {
          view.named_entities.push_back(edge_triple(op));
        }
      }
    }
    for (NodeId id : nodes) view.named_entities.push_back(instance(id));
  }

  // Semantic roles.
  {
    std::set<NodeId> nodes;
    for (const Edge &e : g.edges()) {
      if (!std::regex_match(e.label, kArg) || !g.node(e.target).is_variable()) {
        continue;
      }
      nodes.insert(e.source);
      nodes.insert(e.target);
      view.srl.push_back(edge_triple(e));
    }
    for (NodeId id : nodes) view.srl.push_back(instance(id));
  }

  for (const Edge &e : g.edges()) {
    const Node &target = g.node(e.target);
    if (!target.is_constant()) continue;
    if (e.label == ":wiki") view.wiki.push_back(CanonicalNumber(target.label));
    if (e.label == ":polarity" && target.label == "-") {
      view.negations.push_back(Lowercase(g.node(e.source).label));
    }
  }
  return view;
}

}  // namespace

std::vector<Triple> ScoringTriples(const AmrGraph &graph) {
  return Canonical(ToTriples(NormalizeInverseEdges(graph)));
}

SmatchResult SmatchTriples(std::span<const Triple> a, std::span<const Triple> b,
                           const SmatchOptions &options) {
  MatchProblem problem(a, b);
  std::mt19937_64 rng(options.seed);
  long best = 0;
  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    std::vector<int> mapping =
        r == 0 ? SeededMapping(problem, rng) : RandomMapping(problem, rng);
    best = std::max(best, Climb(problem, mapping));
    if (best == std::min(problem.total_a(), problem.total_b())) break;
  }
  return SmatchResult::FromCounts(best, problem.total_a(), problem.total_b());
}

SmatchResult SmatchTriplesExact(std::span<const Triple> a,
                                std::span<const Triple> b) {
  MatchProblem problem(a, b);
  if (problem.num_a() > kExactLimit || problem.num_b() > kExactLimit) {
    throw std::invalid_argument("exact Smatch supports at most " +
                                std::to_string(kExactLimit) +
                                " variables per graph");
  }
  std::vector<int> mapping(problem.num_a(), -1);
  std::vector<bool> used(problem.num_b(), false);
  long best = 0;
  Enumerate(problem, mapping, used, 0, &best);
  return SmatchResult::FromCounts(best, problem.total_a(), problem.total_b());
}

SmatchResult Smatch(const AmrGraph &a, const AmrGraph &b,
                    const SmatchOptions &options) {
  return SmatchTriples(ScoringTriples(a), ScoringTriples(b), options);
}

SmatchResult SmatchExact(const AmrGraph &a, const AmrGraph &b) {
  return SmatchTriplesExact(ScoringTriples(a), ScoringTriples(b));
}

std::map<std::string, SmatchResult> FineGrained(const AmrGraph &a,
                                                const AmrGraph &b,
                                                const SmatchOptions &options) {
  const MetricView va = BuildView(a);
  const MetricView vb = BuildView(b);
  std::map<std::string, SmatchResult> result;
  result["Smatch"] = SmatchTriples(va.all, vb.all, options);
  result["Unlabeled"] = SmatchTriples(va.unlabeled, vb.unlabeled, options);
  result["No WSD"] = SmatchTriples(va.no_wsd, vb.no_wsd, options);
  result["Reentrancy"] = SmatchTriples(va.reentrancy, vb.reentrancy, options);
  result["Concepts"] = MultisetF1(va.concepts, vb.concepts);
  result["Named Ent."] =
      SmatchTriples(va.named_entities, vb.named_entities, options);
  result["Wikification"] = MultisetF1(va.wiki, vb.wiki);
  result["Negations"] = MultisetF1(va.negations, vb.negations);
  result["SRL"] = SmatchTriples(va.srl, vb.srl, options);
  return result;
}

CorpusReport CorpusScore(std::span<const ScoredPair> pairs,
                         const std::vector<std::string> &metrics,
                         const SmatchOptions &options) {
  CorpusReport report;
  std::vector<std::string> wanted = metrics;
  if (wanted.empty()) wanted.assign(std::begin(kMetricNames), std::end(kMetricNames));
  for (const std::string &name : wanted) {
    if (std::find(std::begin(kMetricNames), std::end(kMetricNames), name) ==
        std::end(kMetricNames)) {
      throw std::invalid_argument("unknown metric '" + name + "'");
    }
    report.metrics[name] = SmatchResult::FromCounts(0, 0, 0);
    report.metrics[name] = SmatchResult{};
  }
  for (const ScoredPair &pair : pairs) {
    std::map<std::string, SmatchResult> scores =
        wanted.size() == 1 && wanted[0] == "Smatch"
            ? std::map<std::string, SmatchResult>{
                  {"Smatch", Smatch(*pair.predicted, *pair.gold, options)}}
            : FineGrained(*pair.predicted, *pair.gold, options);
    for (auto &[name, total] : report.metrics) {
      const SmatchResult &s = scores.at(name);
      total = SmatchResult::FromCounts(total.matched + s.matched,
                                       total.total_a + s.total_a,
                                       total.total_b + s.total_b);
    }
    ++report.pairs;
  }
  return report;
}

std::string CorpusReport::ToTable() const {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-14s %9s %9s %9s\n", "Metric",
                "Precision", "Recall", "F1");
  out += line;
  for (const char *name : kMetricNames) {
    auto it = metrics.find(name);
    if (it == metrics.end()) continue;
    std::snprintf(line, sizeof(line), "%-14s %9.1f %9.1f %9.1f\n", name,
                  100 * it->second.precision, 100 * it->second.recall,
                  100 * it->second.f1);
    out += line;
  }
  return out;
}

std::string CorpusReport::ToJsonLines() const {
  std::string out;
  for (const char *name : kMetricNames) {
    auto it = metrics.find(name);
    if (it == metrics.end()) continue;
    nlohmann::json record = {{"metric", name},
                             {"precision", it->second.precision},
                             {"recall", it->second.recall},
                             {"f1", it->second.f1},
                             {"matched", it->second.matched},
                             {"total_predicted", it->second.total_a},
                             {"total_gold", it->second.total_b}};
    out += record.dump() + "\n";
  }
  return out;
}

}  // namespace amreager
