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

#include "amreager/corpus.h"

#include "amreager/errors.h"
#include "doctest.h"
#include "testing/testing.h"

namespace amreager {
namespace {

constexpr char kBank[] =
    "# AMR release; header comment\n"
    "\n"
    "# ::id s1\n"
    "# ::snt The dog wants to eat\n"
    "# ::tok The dog wants to eat\n"
    "# ::alignments 1-2|0.0 2-3|0 4-5|0.1\n"
    "(w / want-01\n"
    "   :ARG0 (d / dog)\n"
    "   :ARG1 (e / eat-01 :ARG0 d))\n"
    "\n"
    "# ::id s2\n"
    "# ::snt Broken\n"
    "(b / broken\n"
    "   :ARG0 (x / thing)\n"
    "\n"
    "# ::id s3 ::date 2020\n"
    "# ::snt Cats .\n"
    "(c / cat)\n";

constexpr char kConllu[] =
    "# sent_id = s1\n"
    "# text = The dog wants to eat\n"
    "1\tThe\tthe\tDET\tDT\t_\t2\tdet\t_\t_\n"
    "2\tdog\tdog\tNOUN\tNN\t_\t3\tnsubj\t_\t_\n"
    "3\twants\twant\tVERB\tVBZ\t_\t0\troot\t_\t_\n"
    "4\tto\tto\tPART\tTO\t_\t5\tmark\t_\t_\n"
    "5\teat\teat\tVERB\tVB\t_\t3\txcomp\t_\tNER=O\n"
    "\n"
    "# sent_id = s3\n"
    "1\tCats\tcat\tNOUN\tNNS\t_\t0\troot\t_\tNER=B-PERSON|SpaceAfter=No\n"
    "2\t.\t.\tPUNCT\t.\t_\t1\tpunct\t_\t_\n";

TEST_CASE("bank parsing keeps going after a bad block") {
  const AmrBank bank = ParseAmrBank(kBank);
  REQUIRE(bank.records.size() == 2);
  REQUIRE(bank.errors.size() == 1);
  CHECK(bank.errors[0].block == 1);
  CHECK(bank.errors[0].line >= 13);
  const AmrRecord &r = bank.records[0];
  CHECK(r.id == "s1");
  CHECK(r.sentence == "The dog wants to eat");
  REQUIRE(r.tokens.has_value());
  CHECK(r.tokens->size() == 5);
  CHECK(r.alignments == "1-2|0.0 2-3|0 4-5|0.1");
  CHECK(r.line == 3);
  CHECK(bank.records[1].id == "s3");
}

TEST_CASE("block formatting reads back") {
  const AmrBank bank = ParseAmrBank(kBank);
  const std::vector<std::string> tokens = {"The", "dog", "wants", "to", "eat"};
  const std::string alignment = "1-2|0.0";
  const std::string text = FormatAmrBlock("s1", "The dog wants to eat",
                                          bank.records[0].parse.graph, &tokens,
                                          &alignment);
  const AmrBank back = ParseAmrBank(text);
  REQUIRE(back.records.size() == 1);
  CHECK(back.records[0].tokens == tokens);
  CHECK(back.records[0].alignments == alignment);
  CHECK(testing::Isomorphic(back.records[0].parse.graph,
                            bank.records[0].parse.graph));
}

TEST_CASE("CoNLL-U") {
  const auto sentences = ParseConllu(kConllu);
  REQUIRE(sentences.size() == 2);
  const TokenizedSentence &s = sentences.at("s1");
  REQUIRE(s.tokens.size() == 5);
  CHECK(s.tokens[2].surface == "wants");
  CHECK(s.tokens[2].lemma == "want");
  CHECK(s.tokens[2].pos == "VBZ");
  CHECK(s.tokens[2].dep_head == -1);
  CHECK(s.tokens[1].dep_head == 2);
  CHECK(s.tokens[1].dep_label == "nsubj");
  CHECK(s.tokens[0].ner == "O");
  CHECK(sentences.at("s3").tokens[0].ner == "PER");
}

TEST_CASE("CoNLL-U errors") {
  CHECK_THROWS_AS(ParseConllu("1\tA\ta\tX\tX\t_\t0\troot\t_\t_\n"), DataError);
  CHECK_THROWS_AS(ParseConllu("# sent_id = a\n1\tA\ta\tX\tX\t_\t0\troot\n"),
                  DataError);
  CHECK_THROWS_AS(ParseConllu("# sent_id = a\n"
                              "1\tA\ta\tX\tX\t_\t2\tdep\t_\t_\n"
                              "2\tB\tb\tX\tX\t_\t1\tdep\t_\t_\n"),
                  DataError);
  CHECK_THROWS_AS(ParseConllu("# sent_id = a\n"
                              "1\tA\ta\tX\tX\t_\t0\troot\t_\t_\n"
                              "2\tB\tb\tX\tX\t_\t0\troot\t_\t_\n"),
                  DataError);
  CHECK_THROWS_AS(ParseConllu("# sent_id = a\n"
                              "1\tA\ta\tX\tX\t_\t0\troot\t_\t_\n"
                              "3\tB\tb\tX\tX\t_\t1\tdep\t_\t_\n"),
                  DataError);
}

TEST_CASE("NER collapse") {
  CHECK(CollapseNerTag("PERSON") == "PER");
  CHECK(CollapseNerTag("B-GPE") == "LOC");
  CHECK(CollapseNerTag("i-org") == "ORG");
  CHECK(CollapseNerTag("NORP") == "MISC");
  CHECK(CollapseNerTag("DATE") == "O");
  CHECK(CollapseNerTag("O") == "O");
}

TEST_CASE("JAMR alignments") {
  const PenmanParse p = ParsePenmanWithPaths(
      "(w / want-01 :ARG0 (d / dog) :ARG1 (e / eat-01 :ARG0 d))");
  const Alignment a = ParseJamrAlignments("1-2|0.0 2-3|0 4-5|0.1", p, 5);
  CHECK(a.size() == 3);
  CHECK(a.TokenOf(*p.graph.FindVariable("d")) == 1);
  CHECK(a.TokenOf(*p.graph.FindVariable("w")) == 2);
  CHECK(a.NodesOf(4) == std::vector<NodeId>{*p.graph.FindVariable("e")});
  CHECK(FormatJamrAlignments(a, p.graph) == "1-2|0.0 2-3|0 4-5|0.1");
  CHECK_THROWS_AS(ParseJamrAlignments("1-2|0.7", p, 5), DataError);
  CHECK_THROWS_AS(ParseJamrAlignments("5-6|0", p, 5), DataError);
  CHECK_THROWS_AS(ParseJamrAlignments("1-2", p, 5), DataError);
  // A node listed twice keeps its first span.
  const Alignment twice = ParseJamrAlignments("0-1|0 2-3|0", p, 5);
  CHECK(twice.TokenOf(*p.graph.FindVariable("w")) == 0);
}

TEST_CASE("alignment bookkeeping") {
  Alignment a;
  CHECK(a.Add(3, 1));
  CHECK_FALSE(a.Add(3, 2));
  CHECK(a.Add(4, 1));
  CHECK(a.NodesOf(1).size() == 2);
  a.Remove(3);
  CHECK_FALSE(a.TokenOf(3).has_value());
  CHECK(a.size() == 1);
}

TEST_CASE("zipping reports every inconsistency") {
  const AmrBank bank = ParseAmrBank(kBank);
  auto annotations = ParseConllu(kConllu);
  ZipResult zipped = ZipExamples(bank.records, annotations, {});
  CHECK(zipped.errors.empty());
  REQUIRE(zipped.examples.size() == 2);
  CHECK(zipped.examples[0].alignment.size() == 3);

  annotations.erase("s3");
  TokenizedSentence extra;
  extra.id = "orphan";
  annotations["orphan"] = extra;
  zipped = ZipExamples(bank.records, annotations, {{"ghost", "0-1|0"}});
  CHECK(zipped.examples.size() == 1);
  REQUIRE(zipped.errors.size() == 3);
}

TEST_CASE("fragments spread over one token keep the one nearest the root") {
  const AmrGraph g =
      ParsePenman("(w / want-01 :ARG1 (g / go-02 :ARG0 (b / boy)))");
  Alignment a;
  a.Add(*g.FindVariable("w"), 0);
  a.Add(*g.FindVariable("g"), 1);
  a.Add(*g.FindVariable("b"), 0);  // reaches w only through token 1
  CHECK(ResolveTokenFragments(g, a) == 1);
  CHECK(a.TokenOf(*g.FindVariable("w")) == 0);
  CHECK_FALSE(a.TokenOf(*g.FindVariable("b")).has_value());
}

TEST_CASE("toy corpus loads cleanly") {
  const auto train = testing::ToyCorpus("train");
  const auto dev = testing::ToyCorpus("dev");
  CHECK(train.size() >= 10);
  CHECK(dev.size() >= 3);
  bool reentrancy = false, name = false, negation = false;
  for (const AnnotatedExample &ex : train) {
    reentrancy |= !NormalizeInverseEdges(ex.graph).ReentrantNodes().empty();
    for (const Edge &e : ex.graph.edges()) {
      name |= e.label == ":name";
      negation |= e.label == ":polarity";
    }
  }
  CHECK(reentrancy);
  CHECK(name);
  CHECK(negation);
}

}  // namespace
}  // namespace amreager
