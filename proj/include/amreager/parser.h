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

// Greedy parsing: at each configuration the action classifier picks the
// best legal action, the label classifier names arcs, the concept table
// supplies Shift fragments and the reentrancy classifier decides whether a
// Reduce draws its reentrant edge.

#ifndef AMREAGER_PARSER_H_
#define AMREAGER_PARSER_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "amreager/features.h"
#include "amreager/mlp.h"
#include "amreager/transition.h"

namespace amreager {

class Classifier {
 public:
  virtual ~Classifier() = default;
  // Probabilities over labels() for dense features. Must be thread-safe.
  virtual std::vector<double> Predict(std::span<const float> features) const = 0;
  virtual const std::vector<std::string> &labels() const = 0;
};

class MlpClassifier : public Classifier {
 public:
  explicit MlpClassifier(Model model) : model_(std::move(model)) {}

  std::vector<double> Predict(std::span<const float> features) const override;
  const std::vector<std::string> &labels() const override {
    return model_.labels;
  }
  const Model &model() const { return model_; }

 private:
  Model model_;
};

struct ParserModels {
  const Classifier *action = nullptr;      // labels: Shift, LArc, RArc, Reduce
  const Classifier *label = nullptr;       // relation labels
  const Classifier *reentrancy = nullptr;  // labels: 0, 1
};

struct ParserOptions {
  double reentrancy_threshold = 0.5;
};

struct ParseStats {
  int steps = 0;
  BuildStats build;
};

class Parser {
 public:
  Parser(ParserModels models, const ConceptTable *concepts,
         const FeatureExtractor *extractor, ParserOptions options = {});

  // Throws DataError for an empty sentence or missing contextual vectors.
  AmrGraph Parse(const TokenizedSentence &sentence,
                 ParseStats *stats = nullptr) const;

 private:
  std::string PickLabel(std::span<const float> features) const;

  ParserModels models_;
  const ConceptTable *concepts_;
  const FeatureExtractor *extractor_;
  ParserOptions options_;
};

// Throws DataError unless every model was trained on `layout` and has the
// label set its role needs.
void CheckModels(const FeatureLayout &layout, const Model &action,
                 const Model &label, const Model &reentrancy);

struct ParsedSentence {
  std::string id;
  bool ok = false;
  AmrGraph graph;
  std::string error;
  ParseStats stats;
};

// Parses each sentence independently with `jobs` worker threads. Output
// order follows the input; a failure is recorded and parsing continues.
std::vector<ParsedSentence> ParseCorpus(
    const Parser &parser, std::span<const TokenizedSentence> sentences,
    int jobs = 1);

}  // namespace amreager

#endif  // AMREAGER_PARSER_H_
