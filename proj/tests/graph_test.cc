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

#include <random>

#include "doctest.h"
#include "testing/testing.h"

namespace amreager {
namespace {

AmrGraph WantDog() {
  AmrGraph g;
  const NodeId w = g.AddVariable("w", "want-01");
  const NodeId d = g.AddVariable("d", "dog");
  const NodeId e = g.AddVariable("e", "eat-01");
  g.AddEdge(w, d, ":ARG0");
  g.AddEdge(w, e, ":ARG1");
  g.AddEdge(e, d, ":ARG0");
  g.set_root(w);
  return g;
}

TEST_CASE("nodes and edges") {
  AmrGraph g = WantDog();
  g.Validate();
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_variables() == 3);
  CHECK(g.FindVariable("d") == 1);
  CHECK_FALSE(g.FindVariable("x").has_value());
  CHECK(g.InDegree(1) == 2);
  CHECK(g.OutDegree(0) == 2);
  CHECK(g.ReentrantNodes() == std::vector<NodeId>{1});
  CHECK(g.HasEdge(0, 1));
  CHECK_FALSE(g.HasEdge(1, 0));
  CHECK_FALSE(g.HasCycle());
  g.AddEdge(1, 0, ":mod");
  CHECK(g.HasCycle());
}

TEST_CASE("structural errors") {
  AmrGraph g;
  const NodeId a = g.AddVariable("a", "and");
  CHECK_THROWS_AS(g.AddVariable("a", "boy"), GraphError);
  const NodeId c = g.AddConstant("-");
  CHECK_THROWS_AS(g.AddEdge(c, a, ":mod"), GraphError);
  CHECK_THROWS_AS(g.AddEdge(a, c, "polarity"), GraphError);
  CHECK_THROWS_AS(g.AddEdge(a, 7, ":mod"), GraphError);
  CHECK_THROWS_AS(g.Validate(), GraphError);  // no root
  g.set_root(c);
  CHECK_THROWS_AS(g.Validate(), GraphError);
  CHECK_THROWS_AS(AmrGraph().Validate(), GraphError);
}

TEST_CASE("fresh variables") {
  AmrGraph g;
  CHECK(g.FreshVariable("dog") == "d");
  g.AddVariable("d", "dog");
  CHECK(g.FreshVariable("dance-01") == "d2");
  g.AddVariable("d2", "dance-01");
  CHECK(g.FreshVariable("Dog") == "d3");
}

TEST_CASE("inverse labels") {
  CHECK(IsInverseLabel(":ARG0-of"));
  CHECK_FALSE(IsInverseLabel(":ARG0"));
  CHECK_FALSE(IsInverseLabel(":consist-of"));
  CHECK_FALSE(IsInverseLabel(":prep-on-behalf-of"));
  CHECK(IsInverseLabel(":consist-of-of"));
  CHECK(InvertLabel(":ARG0") == ":ARG0-of");
  CHECK(InvertLabel(":ARG0-of") == ":ARG0");
  CHECK(InvertLabel(":consist-of") == ":consist-of-of");
  CHECK(InvertLabel(InvertLabel(":consist-of")) == ":consist-of");
}

TEST_CASE("normalize inverse edges") {
  AmrGraph g;
  const NodeId b = g.AddVariable("b", "boy");
  const NodeId w = g.AddVariable("w", "want-01");
  const NodeId c = g.AddVariable("c", "cat");
  g.AddEdge(b, w, ":ARG0-of");
  g.AddEdge(b, c, ":consist-of");
  g.set_root(b);
  const AmrGraph n = NormalizeInverseEdges(g);
  CHECK(n.edges()[0] == Edge{w, b, ":ARG0"});
  CHECK(n.edges()[1] == Edge{b, c, ":consist-of"});
  CHECK(n.root() == b);
}

TEST_CASE("sense suffix") {
  CHECK(StripSenseSuffix("want-01") == "want");
  CHECK(StripSenseSuffix("run-101") == "run");
  CHECK(StripSenseSuffix("dog") == "dog");
  CHECK(StripSenseSuffix("have-org-role-91") == "have-org-role");
  CHECK(StripSenseSuffix("-") == "-");
}

TEST_CASE("triples") {
  AmrGraph g = WantDog();
  g.AddEdge(0, g.AddConstant("-"), ":polarity");
  const std::vector<Triple> triples = ToTriples(g);
  REQUIRE(triples.size() == 3 + 3 + 1 + 1);
  CHECK(triples[0] == Triple{TripleKind::kInstance, "w", "instance", "want-01"});
  CHECK(triples[3] == Triple{TripleKind::kRelation, "w", "ARG0", "d"});
  CHECK(triples[6] == Triple{TripleKind::kAttribute, "w", "polarity", "-"});
  CHECK(triples[7] == Triple{TripleKind::kAttribute, "w", "TOP", "top"});
  CHECK(ToTriples(FromTriples(triples)) == triples);
}

TEST_CASE("triples round trip on random graphs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const AmrGraph g = testing::RandomGraph(rng);
    CHECK(testing::Isomorphic(FromTriples(ToTriples(g)), g));
  }
}

TEST_CASE("isomorphism oracle") {
  const AmrGraph a = WantDog();
  AmrGraph b;
  const NodeId d = b.AddVariable("x", "dog");
  const NodeId e = b.AddVariable("y", "eat-01");
  const NodeId w = b.AddVariable("z", "want-01");
  b.AddEdge(e, d, ":ARG0");
  b.AddEdge(d, w, ":ARG0-of");
  b.AddEdge(w, e, ":ARG1");
  b.set_root(w);
  CHECK(testing::Isomorphic(a, b));
  b.set_root(e);
  CHECK_FALSE(testing::Isomorphic(a, b));
  AmrGraph c = WantDog();
  c.RelabelEdge(2, ":ARG1");
  CHECK_FALSE(testing::Isomorphic(a, c));
}

}  // namespace
}  // namespace amreager
