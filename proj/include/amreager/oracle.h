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

// The static oracle: derives the gold action sequence for an aligned
// example and turns it into training samples for the three classifiers.
//
// At every configuration the first matching rule fires:
//
//   1. a gold edge between the top two stack nodes is still missing: add
//      it with LeftArc or RightArc; with ROOT second and the gold root on
//      top, RightArc(:TOP)
//   2. the top node has no missing gold edge to a node still in the
//      buffer: Reduce, drawing the reentrant edge to the sibling candidate
//      when the gold graph has one
//   3. the buffer is not empty: Shift the gold fragment of the next token
//   4. Reduce
//
// Gold edges the rules cannot reach are counted in the loss report.

#ifndef AMREAGER_ORACLE_H_
#define AMREAGER_ORACLE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amreager/corpus.h"
#include "amreager/features.h"
#include "amreager/transition.h"

namespace amreager {

struct LossReport {
  int gold_nodes = 0;
  int gold_edges = 0;
  int nodes_dropped = 0;            // owned by no token fragment
  int edges_dropped = 0;            // never realized
  int reentrant_edges_dropped = 0;  // dropped edges into reentrant nodes
  int root_fallbacks = 0;           // root chosen without a ROOT arc

  LossReport &operator+=(const LossReport &other);
  std::string ToJson() const;
};

struct OracleResult {
  std::vector<Action> actions;
  AmrGraph reconstructed;
  LossReport loss;
};

// Throws DataError when the normalized gold graph has a cycle or the
// alignment points outside the graph or the sentence.
OracleResult RunOracle(const AnnotatedExample &example);

// Replays actions from the initial configuration.
Configuration Replay(int num_tokens, std::span<const Action> actions);

enum class ClassifierId : uint32_t { kAction = 0, kLabel = 1, kReentrancy = 2 };

inline constexpr std::array<ClassifierId, 3> kClassifierIds = {
    ClassifierId::kAction, ClassifierId::kLabel, ClassifierId::kReentrancy};

std::string_view ClassifierName(ClassifierId id);
// Accepts "action"/"label"/"reentrancy" and "theta"/"lambda"/"rho".
ClassifierId ParseClassifierId(std::string_view name);

// Labels of the action and reentrancy classifiers, in id order.
std::vector<std::string> FixedLabels(ClassifierId id);

// Training rows of one classifier in stored feature form.
//
// Sample file, little-endian:
//
//   "AMRS"  u32 classifier id  u32 width  u32 count  u64 manifest hash
//   count x (width float32, u32 label id)
//
// with the label names in a sidecar text file, one per line in id order.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(ClassifierId classifier, int width, uint64_t manifest_hash);

  void Add(std::span<const float> features, const std::string &label);
  void Append(const SampleSet &other);

  ClassifierId classifier() const { return classifier_; }
  int width() const { return width_; }
  uint64_t manifest_hash() const { return manifest_hash_; }
  size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::span<const float> Row(size_t i) const;
  uint32_t Label(size_t i) const { return labels_[i]; }
  const std::vector<std::string> &label_names() const { return label_names_; }

  // Header size in bytes.
  static constexpr size_t kHeaderBytes = 24;

  std::string Serialize() const;
  static SampleSet Parse(std::string_view bytes,
                         std::vector<std::string> label_names);
  // Writes `path` and `path` + ".labels".
  void Save(const std::filesystem::path &path) const;
  static SampleSet Load(const std::filesystem::path &path);

 private:
  uint32_t LabelId(const std::string &label);

  ClassifierId classifier_ = ClassifierId::kAction;
  int width_ = 0;
  uint64_t manifest_hash_ = 0;
  std::vector<float> rows_;
  std::vector<uint32_t> labels_;
  std::vector<std::string> label_names_;
};

struct ExampleSamples {
  SampleSet action;
  SampleSet label;
  SampleSet reentrancy;

  SampleSet &Get(ClassifierId id);
  const SampleSet &Get(ClassifierId id) const;
};

// Features come from the configuration before each action. One action
// sample per action; one label sample per arc between two nodes and per
// reentrant edge; one reentrancy sample per Reduce with a candidate.
ExampleSamples EmitTrainingSamples(const AnnotatedExample &example,
                                   const OracleResult &result,
                                   const FeatureExtractor &extractor);

ExampleSamples MakeSampleSets(const FeatureLayout &layout);

}  // namespace amreager

#endif  // AMREAGER_ORACLE_H_
