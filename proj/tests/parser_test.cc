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

#include "amreager/parser.h"

#include <atomic>
#include <memory>

#include "amreager/errors.h"
#include "amreager/oracle.h"
#include "amreager/penman.h"
#include "doctest.h"
#include "testing/testing.h"

namespace amreager {
namespace {

// Answers with one-hot distributions from a script, then with a default.
class ScriptedClassifier : public Classifier {
 public:
  ScriptedClassifier(std::vector<std::string> labels, std::vector<int> script,
                     int fallback = 0)
      : labels_(std::move(labels)), script_(std::move(script)), fallback_(fallback) {}

  std::vector<double> Predict(std::span<const float>) const override {
    const size_t call = calls_++;
    std::vector<double> p(labels_.size(), 0.0);
    p[call < script_.size() ? script_[call] : fallback_] = 1.0;
    return p;
  }
  const std::vector<std::string> &labels() const override { return labels_; }
  size_t calls() const { return calls_; }

 private:
  std::vector<std::string> labels_;
  std::vector<int> script_;
  int fallback_;
  mutable std::atomic<size_t> calls_{0};
};

// Fixed probabilities for every call.
class ConstantClassifier : public Classifier {
 public:
  ConstantClassifier(std::vector<std::string> labels, std::vector<double> p)
      : labels_(std::move(labels)), p_(std::move(p)) {}
  std::vector<double> Predict(std::span<const float>) const override { return p_; }
  const std::vector<std::string> &labels() const override { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> p_;
};

struct Fixture {
  std::vector<AnnotatedExample> train = testing::ToyCorpus("train");
  ConceptTable concepts = BuildConceptTable(train);
  FeatureExtractor extractor = MakeExtractor();
  std::vector<std::string> relations = {":ARG0", ":ARG1", ":mod", ":polarity"};

  FeatureExtractor MakeExtractor() const {
    Embeddings e;
    e.table = std::make_shared<const StaticTable>(
        StaticTable::Load(testing::SourcePath("data/toy/vectors.txt")));
    return FeatureExtractor(FeatureTemplate(), TagVocabularies::Build(train), e);
  }
};

int IndexOf(const std::vector<std::string> &v, const std::string &s) {
  return static_cast<int>(std::find(v.begin(), v.end(), s) - v.begin());
}

TEST_CASE("replaying oracle decisions reproduces the oracle graph") {
  Fixture f;
  int compared = 0;
  for (const AnnotatedExample &ex : f.train) {
    const OracleResult r = RunOracle(ex);
    // Only sentences whose concept table fragments match the gold ones.
    bool same_fragments = true;
    int shift = 0;
    for (const Action &a : r.actions) {
      if (a.kind != ActionKind::kShift) continue;
      same_fragments &= FormatFragment(a.fragment) ==
                        FormatFragment(f.concepts.Lookup(ex.sentence.tokens[shift++]));
    }
    if (!same_fragments) continue;
    std::vector<int> actions, labels, reentrancy;
    std::vector<std::string> relations = f.relations;
    Configuration c(static_cast<int>(ex.sentence.tokens.size()));
    for (const Action &a : r.actions) {
      actions.push_back(static_cast<int>(a.kind));
      const bool arc = a.kind == ActionKind::kLeftArc || a.kind == ActionKind::kRightArc;
      if ((arc && a.label != kRootLabel) || (a.kind == ActionKind::kReduce && a.reentrancy)) {
        if (IndexOf(relations, a.label) == static_cast<int>(relations.size())) {
          relations.push_back(a.label);
        }
        labels.push_back(IndexOf(relations, a.label));
      }
      if (a.kind == ActionKind::kReduce && ReentrancyCandidate(c)) {
        reentrancy.push_back(a.reentrancy ? 1 : 0);
      }
      c = Apply(c, a);
    }
    ScriptedClassifier action(FixedLabels(ClassifierId::kAction), actions);
    ScriptedClassifier label(relations, labels);
    ScriptedClassifier reent(FixedLabels(ClassifierId::kReentrancy), reentrancy);
    const Parser parser({&action, &label, &reent}, &f.concepts, &f.extractor);
    ParseStats stats;
    const AmrGraph g = parser.Parse(ex.sentence, &stats);
    CHECK_MESSAGE(testing::Isomorphic(g, r.reconstructed), ex.id);
    CHECK(stats.steps == static_cast<int>(r.actions.size()));
    CHECK(action.calls() == r.actions.size());
    CHECK(label.calls() == labels.size());
    CHECK(reent.calls() == reentrancy.size());
    ++compared;
  }
  CHECK(compared >= 8);
}

TEST_CASE("illegal preferences are masked") {
  Fixture f;
  // Always prefers LeftArc, then RightArc: every run still terminates.
  ConstantClassifier action(FixedLabels(ClassifierId::kAction), {0.1, 0.5, 0.3, 0.1});
  ConstantClassifier label(f.relations, {0.1, 0.7, 0.1, 0.1});
  ConstantClassifier reent(FixedLabels(ClassifierId::kReentrancy), {0.5, 0.5});
  const Parser parser({&action, &label, &reent}, &f.concepts, &f.extractor);
  for (const AnnotatedExample &ex : f.train) {
    const AmrGraph g = parser.Parse(ex.sentence);
    g.Validate();
    CHECK_NOTHROW(SerializePenman(g));
  }
}

TEST_CASE("reentrancy threshold") {
  Fixture f;
  const AnnotatedExample &ex = f.train[0];  // The dog wants to eat
  const std::vector<int> script = {0, 0, 0, 1, 0, 0, 2, 3, 3, 3, 3};
  ConstantClassifier label(f.relations, {0.9, 0.1, 0, 0});
  ConstantClassifier reent(FixedLabels(ClassifierId::kReentrancy), {0.4, 0.6});
  for (double threshold : {0.5, 0.7}) {
    ScriptedClassifier action(FixedLabels(ClassifierId::kAction), script);
    ParserOptions options;
    options.reentrancy_threshold = threshold;
    const Parser parser({&action, &label, &reent}, &f.concepts, &f.extractor, options);
    const AmrGraph g = parser.Parse(ex.sentence);
    CHECK(g.edges().size() == (threshold < 0.6 ? 3u : 2u));
  }
}

TEST_CASE("label sets are checked") {
  Fixture f;
  ConstantClassifier wrong({"a", "b", "c", "d"}, {1, 0, 0, 0});
  ConstantClassifier label(f.relations, {1, 0, 0, 0});
  ConstantClassifier reent(FixedLabels(ClassifierId::kReentrancy), {1, 0});
  CHECK_THROWS_AS(Parser({&wrong, &label, &reent}, &f.concepts, &f.extractor),
                  std::invalid_argument);
  CHECK_THROWS_AS(Parser({&reent, &label, &wrong}, &f.concepts, &f.extractor),
                  std::invalid_argument);
}

TEST_CASE("models must match the feature layout") {
  Fixture f;
  const FeatureLayout &layout = f.extractor.layout();
  auto model = [&](ClassifierId id, std::vector<std::string> labels) {
    Model m;
    m.classifier = id;
    m.manifest_hash = layout.hash();
    m.labels = labels;
    m.mlp = Mlp({layout.dense_width(), static_cast<int>(labels.size())});
    return m;
  };
  const Model action = model(ClassifierId::kAction, FixedLabels(ClassifierId::kAction));
  const Model label = model(ClassifierId::kLabel, f.relations);
  const Model reent = model(ClassifierId::kReentrancy, FixedLabels(ClassifierId::kReentrancy));
  CHECK_NOTHROW(CheckModels(layout, action, label, reent));
  Model stale = label;
  stale.manifest_hash ^= 1;
  CHECK_THROWS_AS(CheckModels(layout, action, stale, reent), DataError);
  CHECK_THROWS_AS(CheckModels(layout, label, action, reent), DataError);
  Model narrow = action;
  narrow.mlp = Mlp({3, 4});
  CHECK_THROWS_AS(CheckModels(layout, narrow, label, reent), DataError);

  const MlpClassifier classifier(action);
  const auto p = classifier.Predict(std::vector<float>(layout.dense_width(), 0.5f));
  CHECK(p.size() == 4);
  CHECK(p[0] == doctest::Approx(0.25));
}

TEST_CASE("corpus parsing keeps order and isolates failures") {
  Fixture f;
  ConstantClassifier action(FixedLabels(ClassifierId::kAction), {0.4, 0.1, 0.3, 0.2});
  ConstantClassifier label(f.relations, {1, 0, 0, 0});
  ConstantClassifier reent(FixedLabels(ClassifierId::kReentrancy), {1, 0});
  const Parser parser({&action, &label, &reent}, &f.concepts, &f.extractor);
  std::vector<TokenizedSentence> sentences;
  for (const AnnotatedExample &ex : f.train) sentences.push_back(ex.sentence);
  TokenizedSentence empty;
  empty.id = "empty";
  sentences.insert(sentences.begin() + 3, empty);

  const auto serial = ParseCorpus(parser, sentences, 1);
  const auto parallel = ParseCorpus(parser, sentences, 4);
  REQUIRE(serial.size() == sentences.size());
  REQUIRE(parallel.size() == sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) {
    CHECK(serial[i].id == sentences[i].id);
    CHECK(parallel[i].id == sentences[i].id);
    CHECK(serial[i].ok == (i != 3));
    if (serial[i].ok) {
      CHECK(SerializePenman(serial[i].graph) == SerializePenman(parallel[i].graph));
    }
  }
  CHECK(serial[3].error.find("no tokens") != std::string::npos);
}

}  // namespace
}  // namespace amreager
