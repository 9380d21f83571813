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

#include "amreager/oracle.h"

#include <cstring>
#include <set>

#include "json.hpp"

#include "amreager/errors.h"
#include "amreager/io.h"
#include "amreager/strings.h"

namespace amreager {

LossReport &LossReport::operator+=(const LossReport &other) {
  gold_nodes += other.gold_nodes;
  gold_edges += other.gold_edges;
  nodes_dropped += other.nodes_dropped;
  edges_dropped += other.edges_dropped;
  reentrant_edges_dropped += other.reentrant_edges_dropped;
  root_fallbacks += other.root_fallbacks;
  return *this;
}

std::string LossReport::ToJson() const {
  nlohmann::json j = {{"gold_nodes", gold_nodes},
                      {"gold_edges", gold_edges},
                      {"nodes_dropped", nodes_dropped},
                      {"edges_dropped", edges_dropped},
                      {"reentrant_edges_dropped", reentrant_edges_dropped},
                      {"root_fallbacks", root_fallbacks}};
  return j.dump();
}

namespace {

// Oracle state beside the configuration: which gold node each built node
// stands for and which gold edges exist already.
class OracleState {
 public:
  OracleState(const AnnotatedExample &example, const AmrGraph &gold)
      : gold_(gold),
        num_tokens_(static_cast<int>(example.sentence.tokens.size())),
        fragments_(ExtractFragments(gold, example.alignment, num_tokens_)),
        realized_(gold.edges().size(), false),
        to_config_(gold.num_nodes(), kNoNode) {
    fragment_of_.assign(gold.num_nodes(), -1);
    for (int t = 0; t < num_tokens_; ++t) {
      if (fragments_.root[t] != kNoNode) fragment_of_[fragments_.root[t]] = t;
    }
  }

  Action Next(const Configuration &config) {
    const NodeId top = config.StackAt(0);
    const NodeId second = config.StackAt(1);
    // Rule 1.
    if (top != kNoNode && second != kNoNode && top != kRootSentinel) {
      if (second == kRootSentinel) {
        if (Gold(top) == gold_.root() &&
            IsLegal(config, ActionKind::kRightArc)) {
          return Action::RightArc(std::string(kRootLabel));
        }
      } else if (int e = Missing(Gold(top), Gold(second)); e >= 0) {
        const Edge &edge = gold_.edges()[e];
        ActionKind kind = edge.source == Gold(top) ? ActionKind::kLeftArc
                                                   : ActionKind::kRightArc;
        if (IsLegal(config, kind)) {
          return kind == ActionKind::kLeftArc ? Action::LeftArc(edge.label)
                                              : Action::RightArc(edge.label);
        }
      }
    }
    // Rule 2.
    if (top != kNoNode && top != kRootSentinel && !PendingFuture(config, top)) {
      return ReduceAction(config);
    }
    // Rule 3.
    if (config.buffer_size() > 0) {
      const int token = config.BufferAt(0);
      if (fragments_.root[token] == kNoNode) return Action::Shift(AmrGraph());
      return Action::Shift(FragmentGraph(gold_, fragments_.nodes[token],
                                         fragments_.root[token]));
    }
    // Rule 4.
    return ReduceAction(config);
  }

  // Bookkeeping for `action` applied to `before`.
  void Observe(const Configuration &before, const Action &action) {
    switch (action.kind) {
      case ActionKind::kShift: {
        const int token = before.BufferAt(0);
        const NodeId base = static_cast<NodeId>(before.graph().num_nodes());
        const auto &members = fragments_.nodes[token];
        for (size_t k = 0; k < members.size(); ++k) {
          Map(members[k], base + static_cast<NodeId>(k));
        }
        std::set<NodeId> inside(members.begin(), members.end());
        for (size_t e = 0; e < gold_.edges().size(); ++e) {
          const Edge &edge = gold_.edges()[e];
          if (inside.count(edge.source) && inside.count(edge.target)) {
            realized_[e] = true;
          }
        }
        break;
      }
      case ActionKind::kLeftArc:
      case ActionKind::kRightArc: {
        auto [source, target] = ArcEndpoints(before, action.kind);
        if (source != kRootSentinel) MarkBetween(source, target);
        break;
      }
      case ActionKind::kReduce:
        if (action.reentrancy) {
          if (auto c = ReentrancyCandidate(before)) MarkBetween(c->first, c->second);
        }
        break;
    }
  }

  LossReport Loss(const Configuration &final_config) const {
    LossReport loss;
    loss.gold_nodes = static_cast<int>(gold_.num_nodes());
    loss.gold_edges = static_cast<int>(gold_.edges().size());
    for (NodeId id = 0; id < static_cast<NodeId>(gold_.num_nodes()); ++id) {
      if (to_config_[id] == kNoNode) ++loss.nodes_dropped;
    }
    for (size_t e = 0; e < gold_.edges().size(); ++e) {
      if (realized_[e]) continue;
      ++loss.edges_dropped;
      const NodeId target = gold_.edges()[e].target;
      if (gold_.node(target).is_variable() && gold_.InDegree(target) >= 2) {
        ++loss.reentrant_edges_dropped;
      }
    }
    if (final_config.designated_root() == kNoNode) loss.root_fallbacks = 1;
    return loss;
  }

 private:
  NodeId Gold(NodeId config_node) const {
    auto it = to_gold_.find(config_node);
    return it == to_gold_.end() ? kNoNode : it->second;
  }

  void Map(NodeId gold, NodeId config) {
    to_config_[gold] = config;
    to_gold_[config] = gold;
  }

  // Index of a missing gold edge between a and b (either direction), or -1.
  int Missing(NodeId a, NodeId b) const {
    if (a == kNoNode || b == kNoNode) return -1;
    for (size_t e = 0; e < gold_.edges().size(); ++e) {
      if (realized_[e]) continue;
      const Edge &edge = gold_.edges()[e];
      if ((edge.source == a && edge.target == b) ||
          (edge.source == b && edge.target == a)) {
        return static_cast<int>(e);
      }
    }
    return -1;
  }

  void MarkBetween(NodeId config_a, NodeId config_b) {
    int e = Missing(Gold(config_a), Gold(config_b));
    if (e >= 0) realized_[e] = true;
  }

  // Whether `node` still has a missing gold edge to the root of a fragment
  // that has not been shifted.
  bool PendingFuture(const Configuration &config, NodeId node) const {
    const NodeId gold = Gold(node);
    if (gold == kNoNode) return false;
    const int next = config.num_tokens() - config.buffer_size();
    for (size_t e = 0; e < gold_.edges().size(); ++e) {
      if (realized_[e]) continue;
      const Edge &edge = gold_.edges()[e];
      NodeId other = edge.source == gold   ? edge.target
                     : edge.target == gold ? edge.source
                                           : kNoNode;
      if (other == kNoNode) continue;
      if (fragment_of_[other] >= next) return true;
    }
    return false;
  }

  Action ReduceAction(const Configuration &config) const {
    auto candidate = ReentrancyCandidate(config);
    if (!candidate) return Action::Reduce(false);
    const NodeId popped = Gold(candidate->first);
    const NodeId sibling = Gold(candidate->second);
    const int e = Missing(popped, sibling);
    if (e < 0) return Action::Reduce(false);
    const Edge &edge = gold_.edges()[e];
    return Action::Reduce(true, edge.source == popped ? edge.label
                                                      : InvertLabel(edge.label));
  }

  const AmrGraph &gold_;
  int num_tokens_;
  TokenFragments fragments_;
  std::vector<bool> realized_;
  std::vector<NodeId> to_config_;
  std::map<NodeId, NodeId> to_gold_;
  std::vector<int> fragment_of_;  // token of a fragment root, else -1
};

}  // namespace

OracleResult RunOracle(const AnnotatedExample &example) {
  const AmrGraph gold = NormalizeInverseEdges(example.graph);
  if (gold.HasCycle()) {
    throw DataError("example '" + example.id +
                    "': gold graph is cyclic after inverse normalization");
  }
  const int num_tokens = static_cast<int>(example.sentence.tokens.size());
  for (const auto &[node, token] : example.alignment.pairs()) {
    if (node < 0 || node >= static_cast<NodeId>(gold.num_nodes()) ||
        token < 0 || token >= num_tokens) {
      throw DataError("example '" + example.id + "': alignment " +
                      std::to_string(node) + "->" + std::to_string(token) +
                      " is out of range");
    }
  }
  OracleState state(example, gold);
  Configuration config(num_tokens);
  OracleResult result;
  while (!config.terminal()) {
    Action action = state.Next(config);
    Configuration next = Apply(config, action);
    state.Observe(config, action);
    result.actions.push_back(std::move(action));
    config = std::move(next);
  }
  result.loss = state.Loss(config);
  result.reconstructed = BuildGraph(config);
  return result;
}

Configuration Replay(int num_tokens, std::span<const Action> actions) {
  Configuration config(num_tokens);
  for (const Action &action : actions) config = Apply(std::move(config), action);
  return config;
}

std::string_view ClassifierName(ClassifierId id) {
  switch (id) {
    case ClassifierId::kAction: return "action";
    case ClassifierId::kLabel: return "label";
    case ClassifierId::kReentrancy: return "reentrancy";
  }
  return "?";
}

ClassifierId ParseClassifierId(std::string_view name) {
  if (name == "action" || name == "theta") return ClassifierId::kAction;
  if (name == "label" || name == "lambda") return ClassifierId::kLabel;
  if (name == "reentrancy" || name == "rho") return ClassifierId::kReentrancy;
  throw DataError("unknown classifier '" + std::string(name) +
                  "' (expected action, label or reentrancy)");
}

std::vector<std::string> FixedLabels(ClassifierId id) {
  switch (id) {
    case ClassifierId::kAction: {
      std::vector<std::string> names;
      for (ActionKind kind : kActionKinds) names.emplace_back(ActionName(kind));
      return names;
    }
    case ClassifierId::kReentrancy:
      return {"0", "1"};
    case ClassifierId::kLabel:
      return {};
  }
  return {};
}

SampleSet::SampleSet(ClassifierId classifier, int width, uint64_t manifest_hash)
    : classifier_(classifier),
      width_(width),
      manifest_hash_(manifest_hash),
      label_names_(FixedLabels(classifier)) {}

uint32_t SampleSet::LabelId(const std::string &label) {
  auto it = std::find(label_names_.begin(), label_names_.end(), label);
  if (it != label_names_.end()) {
    return static_cast<uint32_t>(it - label_names_.begin());
  }
  if (classifier_ != ClassifierId::kLabel) {
    throw std::invalid_argument("label '" + label + "' is not valid for the " +
                                std::string(ClassifierName(classifier_)) +
                                " classifier");
  }
  label_names_.push_back(label);
  return static_cast<uint32_t>(label_names_.size() - 1);
}

void SampleSet::Add(std::span<const float> features, const std::string &label) {
  if (static_cast<int>(features.size()) != width_) {
    throw std::invalid_argument("sample width " +
                                std::to_string(features.size()) +
                                " != " + std::to_string(width_));
  }
  rows_.insert(rows_.end(), features.begin(), features.end());
  labels_.push_back(LabelId(label));
}

void SampleSet::Append(const SampleSet &other) {
  if (other.width_ != width_ || other.classifier_ != classifier_ ||
      other.manifest_hash_ != manifest_hash_) {
    throw std::invalid_argument("appending incompatible sample sets");
  }
  for (size_t i = 0; i < other.size(); ++i) {
    Add(other.Row(i), other.label_names_[other.labels_[i]]);
  }
}

std::span<const float> SampleSet::Row(size_t i) const {
  return std::span<const float>(rows_).subspan(i * width_, width_);
}

std::string SampleSet::Serialize() const {
  ByteWriter writer;
  writer.PutBytes("AMRS");
  writer.PutU32(static_cast<uint32_t>(classifier_));
  writer.PutU32(static_cast<uint32_t>(width_));
  writer.PutU32(static_cast<uint32_t>(size()));
  writer.PutU64(manifest_hash_);
  for (size_t i = 0; i < size(); ++i) {
    for (float v : Row(i)) writer.PutF32(v);
    writer.PutU32(labels_[i]);
  }
  return writer.Release();
}

SampleSet SampleSet::Parse(std::string_view bytes,
                           std::vector<std::string> label_names) {
  ByteReader reader(bytes);
  if (reader.GetBytes(4, "magic") != "AMRS") {
    throw DataError("bad magic at byte 0: not a sample file");
  }
  const uint32_t classifier = reader.GetU32("classifier id");
  if (classifier > 2) {
    throw DataError("bad classifier id " + std::to_string(classifier) +
                    " at byte 4");
  }
  const uint32_t width = reader.GetU32("width");
  const uint32_t count = reader.GetU32("count");
  const uint64_t hash = reader.GetU64("manifest hash");
  SampleSet set(static_cast<ClassifierId>(classifier), static_cast<int>(width),
                hash);
  set.label_names_ = std::move(label_names);
  if (reader.remaining() != static_cast<size_t>(count) * (4 * width + 4)) {
    throw DataError("sample file body has " + std::to_string(reader.remaining()) +
                    " bytes, expected " +
                    std::to_string(static_cast<size_t>(count) * (4 * width + 4)));
  }
  set.rows_.reserve(static_cast<size_t>(count) * width);
  for (uint32_t i = 0; i < count; ++i) {
    for (uint32_t k = 0; k < width; ++k) set.rows_.push_back(reader.GetF32("feature"));
    const size_t offset = reader.offset();
    const uint32_t label = reader.GetU32("label");
    if (label >= set.label_names_.size()) {
      throw DataError("label id " + std::to_string(label) + " at byte " +
                      std::to_string(offset) + " is not in the label file");
    }
    set.labels_.push_back(label);
  }
  return set;
}

void SampleSet::Save(const std::filesystem::path &path) const {
  WriteFile(path, Serialize());
  std::string labels;
  for (const std::string &name : label_names_) labels += name + "\n";
  std::filesystem::path sidecar = path;
  sidecar += ".labels";
  WriteFile(sidecar, labels);
}

SampleSet SampleSet::Load(const std::filesystem::path &path) {
  std::filesystem::path sidecar = path;
  sidecar += ".labels";
  std::vector<std::string> names = Split(ReadFile(sidecar), '\n');
  if (!names.empty() && names.back().empty()) names.pop_back();
  try {
    return Parse(ReadFile(path), std::move(names));
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

SampleSet &ExampleSamples::Get(ClassifierId id) {
  switch (id) {
    case ClassifierId::kAction: return action;
    case ClassifierId::kLabel: return label;
    case ClassifierId::kReentrancy: return reentrancy;
  }
  return action;
}

const SampleSet &ExampleSamples::Get(ClassifierId id) const {
  return const_cast<ExampleSamples *>(this)->Get(id);
}

ExampleSamples MakeSampleSets(const FeatureLayout &layout) {
  return {SampleSet(ClassifierId::kAction, layout.stored_width(), layout.hash()),
          SampleSet(ClassifierId::kLabel, layout.stored_width(), layout.hash()),
          SampleSet(ClassifierId::kReentrancy, layout.stored_width(),
                    layout.hash())};
}

ExampleSamples EmitTrainingSamples(const AnnotatedExample &example,
                                   const OracleResult &result,
                                   const FeatureExtractor &extractor) {
  ExampleSamples samples = MakeSampleSets(extractor.layout());
  Configuration config(static_cast<int>(example.sentence.tokens.size()));
  for (const Action &action : result.actions) {
    const std::vector<float> features =
        extractor.ExtractStored(config, example.sentence);
    samples.action.Add(features, std::string(ActionName(action.kind)));
    switch (action.kind) {
      case ActionKind::kLeftArc:
      case ActionKind::kRightArc:
        if (ArcEndpoints(config, action.kind).first != kRootSentinel) {
          samples.label.Add(features, action.label);
        }
        break;
      case ActionKind::kReduce:
        if (ReentrancyCandidate(config)) {
          samples.reentrancy.Add(features, action.reentrancy ? "1" : "0");
          if (action.reentrancy) samples.label.Add(features, action.label);
        }
        break;
      case ActionKind::kShift:
        break;
    }
    config = Apply(std::move(config), action);
  }
  return samples;
}

}  // namespace amreager
