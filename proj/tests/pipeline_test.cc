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

#include "amreager/pipeline.h"

#include <atomic>
#include <map>
#include <set>

#include "amreager/errors.h"
#include "amreager/io.h"
#include "amreager/penman.h"
#include "doctest.h"
#include "json.hpp"
#include "testing/testing.h"

namespace amreager {
namespace {

PreprocessOptions Preprocess(const std::string &split, const fs::path &out) {
  PreprocessOptions o;
  o.amr = testing::SourcePath("data/toy/" + split + ".amr");
  o.conllu = testing::SourcePath("data/toy/" + split + ".conllu");
  o.out_dir = out;
  return o;
}

OracleOptions Oracle(const fs::path &root, const fs::path &out) {
  OracleOptions o;
  o.train_archive = root / "train" / "archive.jsonl";
  o.dev_archive = root / "dev" / "archive.jsonl";
  o.out_dir = out;
  o.features.static_vectors = testing::SourcePath("data/toy/vectors.txt");
  return o;
}

std::map<std::string, std::string> DirectoryContents(const fs::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    files[entry.path().filename().string()] = ReadFile(entry.path());
  }
  return files;
}

TEST_CASE("archive round trip") {
  const auto dir = testing::TempDir("archive");
  const auto train = testing::ToyCorpus("train");
  WriteArchive(dir / "a.jsonl", train);
  const auto back = ReadArchive(dir / "a.jsonl");
  REQUIRE(back.size() == train.size());
  for (size_t i = 0; i < train.size(); ++i) {
    CHECK(back[i].id == train[i].id);
    CHECK(back[i].text == train[i].text);
    CHECK(back[i].sentence.tokens.size() == train[i].sentence.tokens.size());
    CHECK(back[i].sentence.tokens[1].dep_label == train[i].sentence.tokens[1].dep_label);
    CHECK(testing::Isomorphic(back[i].graph, train[i].graph));
    // Every aligned concept sits on the same token after re-parsing.
    std::multiset<std::pair<std::string, int>> a, b;
    for (auto [node, token] : train[i].alignment.pairs()) {
      a.emplace(train[i].graph.node(node).label, token);
    }
    for (auto [node, token] : back[i].alignment.pairs()) {
      b.emplace(back[i].graph.node(node).label, token);
    }
    CHECK(a == b);
  }
  WriteFile(dir / "bad.jsonl", "{\"id\": 1}\n");
  CHECK_THROWS_AS(ReadArchive(dir / "bad.jsonl"), DataError);
  fs::remove_all(dir);
}

TEST_CASE("corpus statistics") {
  const auto train = testing::ToyCorpus("train");
  const CorpusStats s = ComputeStats(train);
  CHECK(s.sentences == static_cast<int>(train.size()));
  CHECK(s.alignment_coverage >= 0.8);
  CHECK(s.reentrant_sentences > 0);
  CHECK(s.ToJson().find("\"nonprojective_sentences\"") != std::string::npos);

  AnnotatedExample crossing;
  crossing.graph = ParsePenman("(a / and :op1 (b / boy) :op2 (c / cat :mod (d / dog)))");
  crossing.sentence.tokens.resize(4);
  // and@0 -> boy@2 crosses cat@1 -> dog@3.
  crossing.alignment.Add(0, 0);
  crossing.alignment.Add(1, 2);
  crossing.alignment.Add(2, 1);
  crossing.alignment.Add(3, 3);
  CHECK(HasCrossingEdges(crossing));
  crossing.alignment.Remove(3);
  crossing.alignment.Add(3, 1);
  CHECK_FALSE(HasCrossingEdges(crossing));
}

TEST_CASE("parallel for") {
  std::vector<std::atomic<int>> hits(100);
  ParallelFor(100, 4, [&](size_t i) { ++hits[i]; });
  for (const auto &h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(ParallelFor(10, 3,
                              [](size_t i) {
                                if (i == 7) throw DataError("seven");
                              }),
                  DataError);
}

TEST_CASE("preprocess is deterministic and reports ingest errors") {
  const auto root = testing::TempDir("preprocess");
  const PreprocessSummary s = RunPreprocess(Preprocess("train", root / "a"));
  RunPreprocess(Preprocess("train", root / "b"));
  CHECK(s.stats.sentences == 16);
  CHECK(s.concept_entries > 0);
  CHECK(DirectoryContents(root / "a").size() == 4);
  auto a = DirectoryContents(root / "a");
  auto b = DirectoryContents(root / "b");
  CHECK(a.at("archive.jsonl") == b.at("archive.jsonl"));
  CHECK(a.at("concepts.tsv") == b.at("concepts.tsv"));
  CHECK(a.at("stats.json") == b.at("stats.json"));
  const auto manifest = nlohmann::json::parse(a.at("manifest.json"));
  CHECK(manifest["command"] == "preprocess");
  CHECK(manifest["outputs"].size() == 3);

  PreprocessOptions mismatched = Preprocess("train", root / "c");
  mismatched.conllu = testing::SourcePath("data/toy/dev.conllu");
  try {
    RunPreprocess(mismatched);
    FAIL("mismatched corpus accepted");
  } catch (const DataError &e) {
    const std::string message = e.what();
    CHECK(message.find("toy.1") != std::string::npos);
    CHECK(message.find("dev.1") != std::string::npos);
  }
  fs::remove_all(root);
}

TEST_CASE("oracle stage") {
  const auto root = testing::TempDir("oracle");
  RunPreprocess(Preprocess("train", root / "train"));
  RunPreprocess(Preprocess("dev", root / "dev"));
  OracleOptions options = Oracle(root, root / "s1");
  const OracleSummary summary = RunOracleStage(options);
  CHECK(summary.replay_smatch >= 0.9);
  CHECK(summary.samples[0] > summary.samples[1]);
  CHECK(summary.dev_samples[0] > 0);
  for (const char *name : {"action.train.samples", "label.dev.samples",
                           "reentrancy.train.samples.labels", "features.manifest",
                           "tags.json", "embedding.json", "loss.json", "manifest.json"}) {
    CHECK_MESSAGE(fs::exists(root / "s1" / name), name);
  }
  // Output does not depend on the number of jobs.
  options.out_dir = root / "s4";
  options.jobs = 4;
  RunOracleStage(options);
  auto one = DirectoryContents(root / "s1");
  auto four = DirectoryContents(root / "s4");
  for (const auto &[name, bytes] : one) {
    if (name != "manifest.json" && name != "embedding.json") {
      CHECK_MESSAGE(four.at(name) == bytes, name);
    }
  }
  // The recorded settings rebuild the same extractor.
  const FeatureExtractor x = LoadFeatureSettings(root / "s1");
  CHECK(x.layout().manifest() == one.at("features.manifest"));

  // Contextual features need vectors for every sentence.
  OracleOptions contextual = Oracle(root, root / "ctx");
  contextual.features.word_source = WordSource::kContextual;
  contextual.features.contextual = testing::SourcePath("tests/data/golden.amre");
  try {
    RunOracleStage(contextual);
    FAIL("missing contextual vectors accepted");
  } catch (const DataError &e) {
    const std::string message = e.what();
    CHECK(message.find("toy.2") != std::string::npos);
    CHECK(message.find("dev.1") != std::string::npos);
    CHECK(message.find("toy.1,") == std::string::npos);
  }
  fs::remove_all(root);
}

TEST_CASE("train, parse and evaluate") {
  const auto root = testing::TempDir("endtoend");
  RunPreprocess(Preprocess("train", root / "train"));
  RunPreprocess(Preprocess("dev", root / "dev"));
  RunOracleStage(Oracle(root, root / "samples"));

  TrainOptions train;
  train.samples_dir = root / "samples";
  train.out_dir = root / "model";
  train.config.hidden_layers = 1;
  train.config.hidden_width = 32;
  train.config.epochs = 5;
  const TrainSummary ts = RunTrain(train);
  CHECK(ts.train_accuracy.size() == 3);
  CHECK(ts.dev_accuracy.size() == 3);
  for (const char *name : {"action.model", "label.model.labels",
                           "reentrancy.metrics.jsonl", "features.manifest",
                           "train_config.json", "manifest.json"}) {
    CHECK_MESSAGE(fs::exists(root / "model" / name), name);
  }

  ParseOptions parse;
  parse.model_dir = root / "model";
  parse.concepts = root / "train" / "concepts.tsv";
  parse.input = testing::SourcePath("data/toy/dev.conllu");
  parse.output = root / "dev.amr";
  parse.jobs = 2;
  const ParseSummary ps = RunParse(parse);
  CHECK(ps.parsed == 5);
  CHECK(ps.failures.empty());
  const AmrBank parsed = LoadAmrFile(root / "dev.amr");
  CHECK(parsed.errors.empty());
  CHECK(parsed.records.size() == 5);
  CHECK(parsed.records[0].id == "dev.1");

  EvaluateOptions self;
  self.predicted = testing::SourcePath("data/toy/dev.amr");
  self.gold = self.predicted;
  const CorpusReport perfect = RunEvaluate(self);
  CHECK(perfect.errors.empty());
  for (const auto &[name, result] : perfect.metrics) CHECK_MESSAGE(result.f1 == 1.0, name);

  EvaluateOptions partial;
  partial.predicted = root / "dev.amr";
  partial.gold = testing::SourcePath("data/toy/train.amr");
  partial.metrics = {"Smatch"};
  const CorpusReport report = RunEvaluate(partial);
  CHECK(report.errors.size() == 16 + 5);
  CHECK(report.metrics.size() == 1);

  // A model directory that does not match the samples fails fast.
  WriteFile(root / "model" / "features.manifest", "tampered\n");
  CHECK_THROWS_AS(RunParse(parse), DataError);

  // An empty sample set cannot be trained.
  const SampleSet loaded = SampleSet::Load(root / "samples" / "reentrancy.train.samples");
  SampleSet(ClassifierId::kReentrancy, loaded.width(), loaded.manifest_hash())
      .Save(root / "samples" / "reentrancy.train.samples");
  train.classifiers = {ClassifierId::kReentrancy};
  CHECK_THROWS_AS(RunTrain(train), DataError);
  fs::remove_all(root);
}

}  // namespace
}  // namespace amreager
