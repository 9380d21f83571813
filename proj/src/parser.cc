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
#include <thread>

#include "amreager/errors.h"
#include "amreager/oracle.h"

namespace amreager {

std::vector<double> MlpClassifier::Predict(std::span<const float> features) const {
  Eigen::VectorXd p = model_.mlp.Predict(features);
  return std::vector<double>(p.data(), p.data() + p.size());
}

Parser::Parser(ParserModels models, const ConceptTable *concepts,
               const FeatureExtractor *extractor, ParserOptions options)
    : models_(models),
      concepts_(concepts),
      extractor_(extractor),
      options_(options) {
  if (models_.action == nullptr || models_.label == nullptr ||
      models_.reentrancy == nullptr || concepts_ == nullptr ||
      extractor_ == nullptr) {
    throw std::invalid_argument("parser needs three classifiers, a concept "
                                "table and a feature extractor");
  }
  if (models_.action->labels() != FixedLabels(ClassifierId::kAction) ||
      models_.reentrancy->labels() != FixedLabels(ClassifierId::kReentrancy) ||
      models_.label->labels().empty()) {
    throw std::invalid_argument("classifier label sets do not fit their roles");
  }
}

std::string Parser::PickLabel(std::span<const float> features) const {
  std::vector<double> p = models_.label->Predict(features);
  return models_.label->labels().at(Argmax(p));
}

AmrGraph Parser::Parse(const TokenizedSentence &sentence,
                       ParseStats *stats) const {
  if (sentence.tokens.empty()) {
    throw DataError("sentence '" + sentence.id + "' has no tokens");
  }
  Configuration config(static_cast<int>(sentence.tokens.size()));
  int steps = 0;
  while (!config.terminal()) {
    const std::vector<float> features = extractor_->Extract(config, sentence);
    std::vector<double> scores = models_.action->Predict(features);
    ActionKind best = ActionKind::kShift;
    double best_score = -1;
    for (ActionKind kind : kActionKinds) {
      const double score = scores.at(static_cast<int>(kind));
      if (IsLegal(config, kind) && score > best_score) {
        best = kind;
        best_score = score;
      }
    }
    Action action;
    switch (best) {
      case ActionKind::kShift:
        action = Action::Shift(
            concepts_->Lookup(sentence.tokens[config.BufferAt(0)]));
        break;
      case ActionKind::kLeftArc:
      case ActionKind::kRightArc: {
        const bool from_root = ArcEndpoints(config, best).first == kRootSentinel;
        std::string label =
            from_root ? std::string(kRootLabel) : PickLabel(features);
        action = best == ActionKind::kLeftArc ? Action::LeftArc(label)
                                              : Action::RightArc(label);
        break;
      }
      case ActionKind::kReduce: {
        action = Action::Reduce(false);
        if (ReentrancyCandidate(config)) {
          std::vector<double> p = models_.reentrancy->Predict(features);
          if (p.at(1) >= options_.reentrancy_threshold) {
            action = Action::Reduce(true, PickLabel(features));
          }
        }
        break;
      }
    }
    config = Apply(std::move(config), action);
    ++steps;
  }
  ParseStats local;
  local.steps = steps;
  AmrGraph graph = BuildGraph(config, &local.build);
  if (stats != nullptr) *stats = local;
  return graph;
}

void CheckModels(const FeatureLayout &layout, const Model &action,
                 const Model &label, const Model &reentrancy) {
  auto check = [&layout](const Model &model, ClassifierId role) {
    const std::string name(ClassifierName(role));
    if (model.classifier != role) {
      throw DataError("model for " + name + " was trained as " +
                      std::string(ClassifierName(model.classifier)));
    }
    if (model.manifest_hash != layout.hash()) {
      throw DataError("the " + name +
                      " model was trained with a different feature manifest; "
                      "rerun oracle and train with the same settings");
    }
    if (model.mlp.input_dim() != layout.dense_width()) {
      throw DataError("the " + name + " model expects " +
                      std::to_string(model.mlp.input_dim()) +
                      " features, the template gives " +
                      std::to_string(layout.dense_width()));
    }
  };
  check(action, ClassifierId::kAction);
  check(label, ClassifierId::kLabel);
  check(reentrancy, ClassifierId::kReentrancy);
}

std::vector<ParsedSentence> ParseCorpus(
    const Parser &parser, std::span<const TokenizedSentence> sentences,
    int jobs) {
  std::vector<ParsedSentence> results(sentences.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i = next++; i < sentences.size(); i = next++) {
      ParsedSentence &out = results[i];
      out.id = sentences[i].id;
      try {
        out.graph = parser.Parse(sentences[i], &out.stats);
        out.ok = true;
      } catch (const std::exception &e) {
        out.error = e.what();
      }
    }
  };
  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(sentences.size())));
  if (workers == 1) {
    work();
    return results;
  }
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) threads.emplace_back(work);
  for (std::thread &t : threads) t.join();
  return results;
}

}  // namespace amreager
