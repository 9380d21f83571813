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

// The pipeline stages behind the command-line tool. Each stage reads and
// writes files under a directory and records a manifest of inputs and
// outputs with their fingerprints.
//
//   preprocess  AMR bank + CoNLL-U (+ alignments) -> archive.jsonl,
//               concepts.tsv, stats.json
//   oracle      archives -> per-classifier sample files, features.manifest,
//               tags.json, embedding.json, loss.json
//   train       sample directory -> <classifier>.model (+ .labels),
//               <classifier>.metrics.jsonl
//   parse       model directory + concept table + CoNLL-U -> AMR bank
//   evaluate    predicted + gold AMR banks -> metric report

#ifndef AMREAGER_PIPELINE_H_
#define AMREAGER_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amreager/corpus.h"
#include "amreager/embeddings.h"
#include "amreager/features.h"
#include "amreager/mlp.h"
#include "amreager/oracle.h"
#include "amreager/parser.h"
#include "amreager/smatch.h"

namespace amreager {

namespace fs = std::filesystem;

// Archive: one JSON object per line with id, text, tokens, the graph in
// PENMAN and the alignment as [node path, token] pairs, node paths in the
// dotted JAMR form.
void WriteArchive(const fs::path &path, std::span<const AnnotatedExample> examples);
std::vector<AnnotatedExample> ReadArchive(const fs::path &path);

struct CorpusStats {
  int sentences = 0;
  int tokens = 0;
  int nodes = 0;
  double alignment_coverage = 0;     // aligned nodes / nodes
  double reentrant_sentences = 0;    // fraction with a reentrant node
  double nonprojective_sentences = 0;  // fraction with crossing aligned edges

  std::string ToJson() const;
};

CorpusStats ComputeStats(std::span<const AnnotatedExample> examples);

// Whether two edges of the graph cross when every node sits at its token.
bool HasCrossingEdges(const AnnotatedExample &example);

// Runs fn(0..n-1) on `jobs` threads.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)> &fn);

struct PreprocessOptions {
  fs::path amr;
  fs::path conllu;
  std::optional<fs::path> alignments;
  fs::path out_dir;
  bool align_missing = true;
};

struct PreprocessSummary {
  CorpusStats stats;
  int fragments_dropped = 0;
  size_t concept_entries = 0;
};

// Throws DataError listing every ingest error.
PreprocessSummary RunPreprocess(const PreprocessOptions &options);

struct FeatureOptions {
  WordSource word_source = WordSource::kStatic;
  ConceptSource concept_source = ConceptSource::kStatic;
  fs::path static_vectors;
  std::optional<fs::path> contextual;  // required for contextual words
  bool use_dependency = true;
};

// embedding.json: feature options with absolute paths and the template.
void WriteFeatureSettings(const fs::path &dir, const FeatureOptions &options,
                          const TagVocabularies &tags,
                          const FeatureExtractor &extractor);

// Rebuilds the extractor recorded in `dir`. `contextual` overrides the
// recorded contextual file (parsing new sentences needs their vectors).
FeatureExtractor LoadFeatureSettings(
    const fs::path &dir, const std::optional<fs::path> &contextual = std::nullopt);

FeatureExtractor MakeExtractor(const FeatureOptions &options,
                               const TagVocabularies &tags);

struct OracleOptions {
  fs::path train_archive;
  std::optional<fs::path> dev_archive;
  fs::path out_dir;
  FeatureOptions features;
  int jobs = 1;
};

struct OracleSummary {
  LossReport loss;
  double replay_smatch = 0;  // reconstructed vs gold, training archive
  size_t samples[3] = {0, 0, 0};
  size_t dev_samples[3] = {0, 0, 0};
};

OracleSummary RunOracleStage(const OracleOptions &options);

struct TrainOptions {
  fs::path samples_dir;
  std::vector<ClassifierId> classifiers = {kClassifierIds.begin(),
                                           kClassifierIds.end()};
  fs::path out_dir;
  TrainConfig config;
  std::optional<SearchSpace> search;
};

struct TrainSummary {
  std::vector<std::pair<ClassifierId, double>> dev_accuracy;  // best checkpoint
  std::vector<std::pair<ClassifierId, double>> train_accuracy;
};

TrainSummary RunTrain(const TrainOptions &options);

struct ParseOptions {
  fs::path model_dir;
  fs::path concepts;
  fs::path input;  // CoNLL-U
  fs::path output;
  std::optional<fs::path> contextual;
  double reentrancy_threshold = 0.5;
  int jobs = 1;
};

struct ParseSummary {
  int parsed = 0;
  std::vector<std::string> failures;  // "id: message"
  int stranded_repairs = 0;
  int root_fallbacks = 0;
};

ParseSummary RunParse(const ParseOptions &options);

struct EvaluateOptions {
  fs::path predicted;
  fs::path gold;
  std::vector<std::string> metrics;  // empty: all
  SmatchOptions smatch;
};

// Pairs graphs by id; ids on one side only are reported as errors and
// score as empty predictions.
CorpusReport RunEvaluate(const EvaluateOptions &options);

// Writes <dir>/manifest.json.
void WriteRunManifest(const fs::path &dir, const std::string &command,
                      const std::vector<std::pair<std::string, fs::path>> &inputs,
                      const std::vector<fs::path> &outputs);

}  // namespace amreager

#endif  // AMREAGER_PIPELINE_H_
