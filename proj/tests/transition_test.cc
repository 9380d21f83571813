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

#include <random>

#include "amreager/penman.h"
#include "doctest.h"
#include "testing/testing.h"

namespace amreager {
namespace {

AmrGraph Concept(const std::string &variable, const std::string &label) {
  AmrGraph g;
  g.set_root(g.AddVariable(variable, label));
  return g;
}

// The action sequence for "The dog wants to eat".
std::vector<Action> Figure1() {
  return {Action::Shift(AmrGraph()),
          Action::Shift(Concept("d", "dog")),
          Action::Shift(Concept("w", "want-01")),
          Action::LeftArc(":ARG0"),
          Action::Shift(AmrGraph()),
          Action::Shift(Concept("e", "eat-01")),
          Action::RightArc(":ARG1"),
          Action::Reduce(true, ":ARG0"),
          Action::Reduce(),
          Action::Reduce(),
          Action::Reduce()};
}

TEST_CASE("initial configuration") {
  const Configuration c(3);
  CHECK(c.stack() == std::vector<NodeId>{kRootSentinel});
  CHECK(c.buffer_size() == 3);
  CHECK(c.BufferAt(0) == 0);
  CHECK(c.BufferAt(3) == -1);
  CHECK(c.StackAt(0) == kRootSentinel);
  CHECK(c.StackAt(1) == kNoNode);
  CHECK(LegalActions(c) == std::vector<ActionKind>{ActionKind::kShift});
  CHECK_FALSE(c.terminal());
}

TEST_CASE("figure 1 sequence builds the graph") {
  Configuration c(5);
  for (const Action &a : Figure1()) {
    const int before = ProgressMeasure(c);
    c = Apply(c, a);
    CHECK(ProgressMeasure(c) < before);
  }
  CHECK(c.terminal());
  BuildStats stats;
  const AmrGraph g = BuildGraph(c, &stats);
  CHECK(stats.root_fallback);
  CHECK(stats.stranded_repairs == 0);
  CHECK(testing::Isomorphic(
      g, ParsePenman("(w / want-01 :ARG0 (d / dog) :ARG1 (e / eat-01 :ARG0 d))")));
  CHECK(c.TokenOf(0) == 1);
  CHECK(c.history().size() == Figure1().size());
}

TEST_CASE("arc legality") {
  Configuration c(3);
  c = Apply(c, Action::Shift(Concept("a", "and")));
  // ROOT is second: only RightArc, and only to a variable.
  CHECK_FALSE(IsLegal(c, ActionKind::kLeftArc));
  CHECK(IsLegal(c, ActionKind::kRightArc));
  c = Apply(c, Action::RightArc(std::string(kRootLabel)));
  CHECK(c.designated_root() == 0);
  CHECK_FALSE(IsLegal(c, ActionKind::kRightArc));

  AmrGraph minus;
  minus.set_root(minus.AddConstant("-"));
  c = Apply(c, Action::Shift(minus));
  CHECK_FALSE(IsLegal(c, ActionKind::kLeftArc));  // a constant has no edges out
  CHECK(IsLegal(c, ActionKind::kRightArc));
  c = Apply(c, Action::RightArc(":polarity"));
  CHECK_FALSE(IsLegal(c, ActionKind::kRightArc));  // already connected
  CHECK_THROWS_AS(Apply(c, Action::LeftArc(":mod")), std::invalid_argument);
  c = Apply(c, Action::Reduce());
  c = Apply(c, Action::Reduce());
  // Only ROOT left with one token unread: Reduce must wait.
  CHECK(LegalActions(c) == std::vector<ActionKind>{ActionKind::kShift});
}

TEST_CASE("reentrancy candidate") {
  Configuration c(3);
  c = Apply(c, Action::Shift(Concept("w", "want-01")));
  c = Apply(c, Action::Shift(Concept("d", "dog")));
  c = Apply(c, Action::RightArc(":ARG0"));
  c = Apply(c, Action::Reduce());
  c = Apply(c, Action::Shift(Concept("e", "eat-01")));
  CHECK_FALSE(ReentrancyCandidate(c).has_value());  // e has no parent yet
  c = Apply(c, Action::RightArc(":ARG1"));
  const auto candidate = ReentrancyCandidate(c);
  REQUIRE(candidate.has_value());
  CHECK(candidate->first == 2);
  CHECK(candidate->second == 1);
  c = Apply(c, Action::Reduce(true, ":ARG0"));
  CHECK(c.graph().HasEdge(2, 1));
}

TEST_CASE("graph assembly") {
  SUBCASE("empty run") {
    Configuration c(1);
    c = Apply(c, Action::Shift(AmrGraph()));
    c = Apply(c, Action::Reduce());
    const AmrGraph g = BuildGraph(c);
    CHECK(SerializePenman(g) == "(a / amr-empty)");
  }
  SUBCASE("stranded components hang off the root") {
    Configuration c(2);
    c = Apply(c, Action::Shift(Concept("b", "boy")));
    c = Apply(c, Action::Shift(Concept("g", "girl")));
    while (!c.terminal()) c = Apply(c, Action::Reduce());
    BuildStats stats;
    const AmrGraph g = BuildGraph(c, &stats);
    g.Validate();
    CHECK(stats.stranded_repairs == 1);
    CHECK(g.edges().size() == 1);
    CHECK(g.edges()[0].label == ":mod");
  }
  SUBCASE("shared constants are split") {
    AmrGraph minus;
    minus.set_root(minus.AddConstant("-"));
    Configuration c(3);
    c = Apply(c, Action::Shift(Concept("a", "and")));
    c = Apply(c, Action::Shift(minus));
    c = Apply(c, Action::RightArc(":polarity"));
    c = Apply(c, Action::Shift(Concept("b", "boy")));
    c = Apply(c, Action::LeftArc(":polarity"));
    while (!c.terminal()) c = Apply(c, Action::Reduce());
    BuildStats stats;
    const AmrGraph g = BuildGraph(c, &stats);
    CHECK(stats.constants_split == 1);
    for (const Node &n : g.nodes()) {
      if (n.is_constant()) CHECK(g.InDegree(n.id) == 1);
    }
  }
}

TEST_CASE("random legal runs terminate with valid graphs") {
  std::mt19937_64 rng(5);
  for (int run = 0; run < 500; ++run) {
    Configuration c(std::uniform_int_distribution<int>(1, 8)(rng));
    int steps = 0;
    while (!c.terminal()) {
      const Action a = testing::RandomLegalAction(rng, c);
      const int measure = ProgressMeasure(c);
      const int literal = StackBufferMeasure(c);
      c = Apply(c, a);
      REQUIRE(ProgressMeasure(c) < measure);
      REQUIRE(StackBufferMeasure(c) <= literal);
      REQUIRE(++steps < 1000);
    }
    const AmrGraph g = BuildGraph(c);
    g.Validate();
    CHECK_NOTHROW(SerializePenman(g));
  }
}

TEST_CASE("fragments") {
  const AmrGraph named = ParseFragment("(p / person :name (n / name :op1 \"Mary\"))");
  CHECK(named.num_nodes() == 3);
  CHECK(FormatFragment(named) == "(p / person :name (n / name :op1 \"Mary\"))");
  const AmrGraph minus = ParseFragment("-");
  REQUIRE(minus.num_nodes() == 1);
  CHECK(minus.node(0).is_constant());
  CHECK(FormatFragment(minus) == "-");
  CHECK(ParseFragment("").empty());
  CHECK(FormatFragment(AmrGraph()).empty());
}

TEST_CASE("gold fragments") {
  const AnnotatedExample ex = testing::ToyExample("toy.4");  // John wants to sleep
  const AmrGraph n = NormalizeInverseEdges(ex.graph);
  const TokenFragments f = ExtractFragments(n, ex.alignment, 5);
  REQUIRE(f.root[0] != kNoNode);
  CHECK(n.node(f.root[0]).label == "person");
  CHECK(f.nodes[0].size() == 3);
  CHECK(f.root[2] == kNoNode);
  const AmrGraph fragment = FragmentGraph(n, f.nodes[0], f.root[0]);
  CHECK(FormatFragment(fragment) == "(p / person :name (n / name :op1 \"John\"))");
}

TEST_CASE("concept table") {
  ConceptTable table;
  table.Add("dog", "(d / dog)", 3);
  table.Add("dog", "(d / hound)", 3);
  table.Add("not", "-");
  CHECK(table.Find("dog") == "(d / dog)");  // tie: smaller text
  CHECK_FALSE(table.Find("cat").has_value());
  CHECK(ConceptTable::FromText(table.ToText()).ToText() == table.ToText());
  CHECK(table.size() == 2);

  Token t;
  t.surface = "Dogs";
  t.lemma = "dog";
  CHECK(FormatFragment(table.Lookup(t)) == "(d / dog)");
  t.surface = "the";
  t.lemma = "the";
  t.pos = "DT";
  CHECK(table.Lookup(t).empty());
  t.surface = "Paris";
  t.lemma = "Paris";
  t.pos = "NNP";
  t.ner = "LOC";
  CHECK(FormatFragment(table.Lookup(t)) == "(c / city :name (n / name :op1 \"Paris\"))");
  t.surface = "12";
  t.lemma = "12";
  t.pos = "CD";
  t.ner = "O";
  CHECK(FormatFragment(table.Lookup(t)) == "12");
  t.surface = "ran";
  t.lemma = "run";
  t.pos = "VBD";
  CHECK(FormatFragment(table.Lookup(t)) == "(r / run-01)");
  t.surface = "tables";
  t.lemma = "table";
  t.pos = "NNS";
  CHECK(FormatFragment(table.Lookup(t)) == "(t / table)");
}

TEST_CASE("concept table from the toy corpus") {
  const auto train = testing::ToyCorpus("train");
  const ConceptTable table = BuildConceptTable(train);
  CHECK(table.Find("want") == "(w / want-01)");
  CHECK(table.Find("not") == "-");
  CHECK(table.Find("john").has_value());
}

}  // namespace
}  // namespace amreager
