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

// Fixed-width feature vectors for a parser configuration.
//
// The template reads three stack positions and two buffer positions:
//
//   stack slot    presence, root, word, concept, POS, NER, dep,
//                 depth, parents, children
//   buffer slot   presence, word, POS, NER, dep
//   pair          dependency relation between the tokens of the top two
//                 stack nodes (one-hot with a final "none" bucket)
//
// POS, NER and dep are one-hot over a vocabulary frozen from the training
// corpus plus an out-of-vocabulary bucket. Scalars are clamped to [0, 10]
// and divided by 10. Without dependency features the dep slots and the pair
// block are all zeros; the width does not change.
//
// Vectors exist in two forms. The stored form, written to sample files,
// keeps a static word or concept embedding as a single float holding the
// table row (-1 for padding), and a contextual word embedding in full. The
// dense form, fed to the classifiers, has every embedding expanded.

#ifndef AMREAGER_FEATURES_H_
#define AMREAGER_FEATURES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "amreager/corpus.h"
#include "amreager/embeddings.h"
#include "amreager/transition.h"

namespace amreager {

struct FeatureTemplate {
  int stack_slots = 3;
  int buffer_slots = 2;
  bool use_dependency = true;
};

// A closed tag set; ids past the end mean out of vocabulary.
class TagVocabulary {
 public:
  TagVocabulary() = default;
  explicit TagVocabulary(std::vector<std::string> tags);

  int Id(const std::string &tag) const;
  // Buckets including out of vocabulary.
  int width() const { return static_cast<int>(tags_.size()) + 1; }
  const std::vector<std::string> &tags() const { return tags_; }

 private:
  std::vector<std::string> tags_;  // sorted, unique
};

struct TagVocabularies {
  TagVocabulary pos;
  TagVocabulary ner;
  TagVocabulary dep;

  static TagVocabularies Build(std::span<const AnnotatedExample> examples);
  // JSON object {"pos": [...], "ner": [...], "dep": [...]}.
  std::string ToJson() const;
  static TagVocabularies FromJson(std::string_view text);
};

enum class SegmentKind {
  kValue,         // same in both forms
  kWordIndex,     // static word row
  kConceptIndex,  // static concept row
};

struct Segment {
  std::string name;  // e.g. "s0.word"
  SegmentKind kind = SegmentKind::kValue;
  bool dependency = false;
  int stored_offset = 0;
  int stored_width = 0;
  int dense_offset = 0;
  int dense_width = 0;
};

class FeatureLayout {
 public:
  FeatureLayout(const FeatureTemplate &feature_template,
                const EmbeddingConfig &config, int word_dim, int concept_dim,
                const TagVocabularies &vocabularies);

  const std::vector<Segment> &segments() const { return segments_; }
  int stored_width() const { return stored_width_; }
  int dense_width() const { return dense_width_; }
  // Slots whose word embedding is stored (5 by default).
  int word_slots() const;

  // Slot table and settings as text; models keep its fingerprint.
  const std::string &manifest() const { return manifest_; }
  uint64_t hash() const { return hash_; }

  // Dense coordinates fed by dependency features.
  std::vector<int> DependencyCoordinates() const;

 private:
  std::vector<Segment> segments_;
  int stored_width_ = 0;
  int dense_width_ = 0;
  std::string manifest_;
  uint64_t hash_ = 0;
};

class FeatureExtractor {
 public:
  FeatureExtractor(FeatureTemplate feature_template,
                   TagVocabularies vocabularies, Embeddings embeddings);

  const FeatureLayout &layout() const { return layout_; }
  const FeatureTemplate &feature_template() const { return template_; }
  const TagVocabularies &vocabularies() const { return vocabularies_; }
  const Embeddings &embeddings() const { return embeddings_; }

  // Throws DataError when a contextual vector is missing.
  std::vector<float> ExtractStored(const Configuration &config,
                                   const TokenizedSentence &sentence) const;
  std::vector<float> Expand(std::span<const float> stored) const;
  std::vector<float> Extract(const Configuration &config,
                             const TokenizedSentence &sentence) const {
    return Expand(ExtractStored(config, sentence));
  }

 private:
  FeatureTemplate template_;
  TagVocabularies vocabularies_;
  Embeddings embeddings_;
  FeatureLayout layout_;
};

}  // namespace amreager

#endif  // AMREAGER_FEATURES_H_
