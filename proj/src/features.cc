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

#include "amreager/features.h"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "amreager/errors.h"
#include "amreager/strings.h"

namespace amreager {

namespace {

constexpr float kScalarCap = 10.0f;

float Scalar(int value) {
  return std::clamp(static_cast<float>(value), 0.0f, kScalarCap) / kScalarCap;
}

std::string DepLabel(const Token &token) {
  return token.dep_label.empty() ? std::string("_") : token.dep_label;
}

}  // namespace

TagVocabulary::TagVocabulary(std::vector<std::string> tags)
    : tags_(std::move(tags)) {
  std::sort(tags_.begin(), tags_.end());
  tags_.erase(std::unique(tags_.begin(), tags_.end()), tags_.end());
}

int TagVocabulary::Id(const std::string &tag) const {
  auto it = std::lower_bound(tags_.begin(), tags_.end(), tag);
  if (it == tags_.end() || *it != tag) return static_cast<int>(tags_.size());
  return static_cast<int>(it - tags_.begin());
}

TagVocabularies TagVocabularies::Build(
    std::span<const AnnotatedExample> examples) {
  std::set<std::string> pos, ner, dep;
  for (const AnnotatedExample &example : examples) {
    for (const Token &token : example.sentence.tokens) {
      pos.insert(token.pos);
      ner.insert(token.ner);
      dep.insert(DepLabel(token));
    }
  }
  TagVocabularies v;
  v.pos = TagVocabulary({pos.begin(), pos.end()});
  v.ner = TagVocabulary({ner.begin(), ner.end()});
  v.dep = TagVocabulary({dep.begin(), dep.end()});
  return v;
}

std::string TagVocabularies::ToJson() const {
  nlohmann::json j = {
      {"pos", pos.tags()}, {"ner", ner.tags()}, {"dep", dep.tags()}};
  return j.dump(1) + "\n";
}

TagVocabularies TagVocabularies::FromJson(std::string_view text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    TagVocabularies v;
    v.pos = TagVocabulary(j.at("pos").get<std::vector<std::string>>());
    v.ner = TagVocabulary(j.at("ner").get<std::vector<std::string>>());
    v.dep = TagVocabulary(j.at("dep").get<std::vector<std::string>>());
    return v;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("bad tag vocabulary file: ") + e.what());
  }
}

FeatureLayout::FeatureLayout(const FeatureTemplate &feature_template,
                             const EmbeddingConfig &config, int word_dim,
                             int concept_dim,
                             const TagVocabularies &vocabularies) {
  const bool contextual = config.word_source == WordSource::kContextual;
  auto add = [this](std::string name, SegmentKind kind, bool dependency,
                    int stored, int dense) {
    segments_.push_back({std::move(name), kind, dependency, stored_width_,
                         stored, dense_width_, dense});
    stored_width_ += stored;
    dense_width_ += dense;
  };
  auto add_word = [&](const std::string &prefix) {
    if (contextual) {
      add(prefix + "word", SegmentKind::kValue, false, word_dim, word_dim);
    } else {
      add(prefix + "word", SegmentKind::kWordIndex, false, 1, word_dim);
    }
  };
  const int pos = vocabularies.pos.width();
  const int ner = vocabularies.ner.width();
  const int dep = vocabularies.dep.width();
  for (int k = 0; k < feature_template.stack_slots; ++k) {
    const std::string prefix = "s" + std::to_string(k) + ".";
    add(prefix + "present", SegmentKind::kValue, false, 1, 1);
    add(prefix + "root", SegmentKind::kValue, false, 1, 1);
    add_word(prefix);
    add(prefix + "concept", SegmentKind::kConceptIndex, false, 1, concept_dim);
    add(prefix + "pos", SegmentKind::kValue, false, pos, pos);
    add(prefix + "ner", SegmentKind::kValue, false, ner, ner);
    add(prefix + "dep", SegmentKind::kValue, true, dep, dep);
    add(prefix + "depth", SegmentKind::kValue, false, 1, 1);
    add(prefix + "parents", SegmentKind::kValue, false, 1, 1);
    add(prefix + "children", SegmentKind::kValue, false, 1, 1);
  }
  for (int k = 0; k < feature_template.buffer_slots; ++k) {
    const std::string prefix = "b" + std::to_string(k) + ".";
    add(prefix + "present", SegmentKind::kValue, false, 1, 1);
    add_word(prefix);
    add(prefix + "pos", SegmentKind::kValue, false, pos, pos);
    add(prefix + "ner", SegmentKind::kValue, false, ner, ner);
    add(prefix + "dep", SegmentKind::kValue, true, dep, dep);
  }
  add("pair.dep", SegmentKind::kValue, true, dep + 1, dep + 1);

  std::string m = "amreager feature manifest 1\n";
  m += "word_source " + std::string(WordSourceName(config.word_source)) + "\n";
  m += "concept_source " +
       std::string(ConceptSourceName(config.concept_source)) + "\n";
  m += "word_dim " + std::to_string(word_dim) + "\n";
  m += "concept_dim " + std::to_string(concept_dim) + "\n";
  m += "stack_slots " + std::to_string(feature_template.stack_slots) + "\n";
  m += "buffer_slots " + std::to_string(feature_template.buffer_slots) + "\n";
  m += "use_dependency " +
       std::string(feature_template.use_dependency ? "1" : "0") + "\n";
  auto tags = [](const TagVocabulary &v) {
    std::string joined;
    for (const std::string &t : v.tags()) joined += " " + t;
    return joined;
  };
  m += "pos" + tags(vocabularies.pos) + "\n";
  m += "ner" + tags(vocabularies.ner) + "\n";
  m += "dep" + tags(vocabularies.dep) + "\n";
  m += "stored_width " + std::to_string(stored_width_) + "\n";
  m += "dense_width " + std::to_string(dense_width_) + "\n";
  m += "segment\tstored_offset\tstored_width\tdense_offset\tdense_width\n";
  for (const Segment &s : segments_) {
    m += s.name + "\t" + std::to_string(s.stored_offset) + "\t" +
         std::to_string(s.stored_width) + "\t" +
         std::to_string(s.dense_offset) + "\t" +
         std::to_string(s.dense_width) + "\n";
  }
  manifest_ = std::move(m);
  hash_ = Fingerprint(manifest_);
}

int FeatureLayout::word_slots() const {
  return static_cast<int>(std::count_if(
      segments_.begin(), segments_.end(),
      [](const Segment &s) { return s.name.ends_with(".word"); }));
}

std::vector<int> FeatureLayout::DependencyCoordinates() const {
  std::vector<int> coordinates;
  for (const Segment &s : segments_) {
    if (!s.dependency) continue;
    for (int k = 0; k < s.dense_width; ++k) coordinates.push_back(s.dense_offset + k);
  }
  return coordinates;
}

FeatureExtractor::FeatureExtractor(FeatureTemplate feature_template,
                                   TagVocabularies vocabularies,
                                   Embeddings embeddings)
    : template_(feature_template),
      vocabularies_(std::move(vocabularies)),
      embeddings_(std::move(embeddings)),
      layout_(template_, embeddings_.config, embeddings_.word_dim(),
              embeddings_.concept_dim(), vocabularies_) {}

std::vector<float> FeatureExtractor::ExtractStored(
    const Configuration &config, const TokenizedSentence &sentence) const {
  std::vector<float> out(layout_.stored_width(), 0.0f);
  const auto &segments = layout_.segments();
  size_t cursor = 0;
  const bool contextual =
      embeddings_.config.word_source == WordSource::kContextual;
  const bool dependency = template_.use_dependency;
  const StaticTable &table = *embeddings_.table;

  auto next = [&]() -> const Segment & { return segments.at(cursor++); };
  auto put = [&](float value) { out[next().stored_offset] = value; };
  auto one_hot = [&](int id, bool enabled) {
    const Segment &s = next();
    if (enabled) out[s.stored_offset + id] = 1.0f;
  };
  auto word = [&](const Token *token) {
    const Segment &s = next();
    if (token == nullptr) {
      if (!contextual) out[s.stored_offset] = -1.0f;
      return;
    }
    if (contextual) {
      std::span<const float> v = embeddings_.TokenVector(sentence.id, *token);
      std::copy(v.begin(), v.end(), out.begin() + s.stored_offset);
    } else {
      out[s.stored_offset] = static_cast<float>(table.TokenIndex(*token));
    }
  };
  auto token_tags = [&](const Token *token) {
    one_hot(token ? vocabularies_.pos.Id(token->pos) : 0, token != nullptr);
    one_hot(token ? vocabularies_.ner.Id(token->ner) : 0, token != nullptr);
    one_hot(token ? vocabularies_.dep.Id(DepLabel(*token)) : 0,
            token != nullptr && dependency);
  };

  for (int k = 0; k < template_.stack_slots; ++k) {
    const NodeId node = config.StackAt(k);
    const bool present = node != kNoNode;
    const bool root = node == kRootSentinel;
    const Token *token = nullptr;
    if (present && !root) token = &sentence.tokens.at(config.TokenOf(node));
    put(present ? 1.0f : 0.0f);
    put(root ? 1.0f : 0.0f);
    word(token);
    {
      const Segment &s = next();
      float index = -1.0f;
      if (token != nullptr &&
          embeddings_.config.concept_source == ConceptSource::kStatic) {
        const Node &n = config.graph().node(node);
        index = static_cast<float>(n.is_variable() ? table.ConceptIndex(n.label)
                                                   : static_cast<int>(table.size()));
      }
      out[s.stored_offset] = index;
    }
    token_tags(token);
    put(token ? Scalar(config.SubgraphDepth(node)) : 0.0f);
    put(token ? Scalar(config.ParentCount(node)) : 0.0f);
    put(token ? Scalar(config.ChildCount(node)) : 0.0f);
  }
  for (int k = 0; k < template_.buffer_slots; ++k) {
    const int index = config.BufferAt(k);
    const Token *token = index >= 0 ? &sentence.tokens.at(index) : nullptr;
    put(token ? 1.0f : 0.0f);
    word(token);
    token_tags(token);
  }
  {
    const Segment &s = next();
    if (dependency) {
      const int none = vocabularies_.dep.width();
      int bucket = none;
      const NodeId top = config.StackAt(0);
      const NodeId second = config.StackAt(1);
      if (top >= 0 && second >= 0) {
        const Token &a = sentence.tokens.at(config.TokenOf(top));
        const Token &b = sentence.tokens.at(config.TokenOf(second));
        if (a.dep_head == b.index) {
          bucket = vocabularies_.dep.Id(DepLabel(a));
        } else if (b.dep_head == a.index) {
          bucket = vocabularies_.dep.Id(DepLabel(b));
        }
      }
      out[s.stored_offset + bucket] = 1.0f;
    }
  }
  return out;
}

std::vector<float> FeatureExtractor::Expand(std::span<const float> stored) const {
  if (static_cast<int>(stored.size()) != layout_.stored_width()) {
    throw std::invalid_argument("stored feature row has width " +
                                std::to_string(stored.size()) + ", expected " +
                                std::to_string(layout_.stored_width()));
  }
  std::vector<float> dense(layout_.dense_width(), 0.0f);
  const StaticTable &table = *embeddings_.table;
  for (const Segment &s : layout_.segments()) {
    auto target = dense.begin() + s.dense_offset;
    if (s.kind == SegmentKind::kValue) {
      std::copy_n(stored.begin() + s.stored_offset, s.stored_width, target);
      continue;
    }
    const int index = static_cast<int>(stored[s.stored_offset]);
    if (index < 0) continue;
    std::span<const float> row = table.Row(index);
    std::copy(row.begin(), row.end(), target);
  }
  return dense;
}

}  // namespace amreager
