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

// Word and concept vectors: a static table in GloVe text format, and a
// store of precomputed contextual token vectors.
//
// Contextual embedding file, all integers little-endian:
//
//   "AMRE"  u16 version (1)  u16 dim
//   repeated until end of file:
//     u32 id length, id bytes (UTF-8)
//     u32 token count
//     token count x dim float32

#ifndef AMREAGER_EMBEDDINGS_H_
#define AMREAGER_EMBEDDINGS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amreager/corpus.h"

namespace amreager {

class StaticTable {
 public:
  // Lines "word v1 ... vd". The unknown vector is the mean of all rows.
  // Throws DataError for an empty table or inconsistent dimensions.
  static StaticTable Parse(std::string_view text);
  static StaticTable Load(const std::filesystem::path &path);

  int dim() const { return dim_; }
  size_t size() const { return words_.size(); }

  // Row index, or size() for the unknown vector.
  int Index(std::string_view word) const;
  // Row for an index; size() gives the unknown vector.
  std::span<const float> Row(int index) const;
  std::span<const float> Lookup(std::string_view word) const {
    return Row(Index(word));
  }
  std::span<const float> unknown() const { return Row(static_cast<int>(size())); }

  // Index of a token: lowercased surface, then lemma, then unknown.
  int TokenIndex(const Token &token) const;
  // Index of a concept: lowercased, sense suffix stripped.
  int ConceptIndex(std::string_view concept_label) const;

 private:
  int dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
  std::vector<float> data_;  // size() + 1 rows; the last is unknown
};

inline constexpr char kContextualMagic[4] = {'A', 'M', 'R', 'E'};
inline constexpr uint16_t kContextualVersion = 1;

class ContextualStore {
 public:
  ContextualStore() = default;
  explicit ContextualStore(int dim) : dim_(dim) {}

  // Throws DataError on bad magic, truncation or duplicate ids, with the
  // byte offset. A dim other than 768 or 1024 only logs a warning.
  static ContextualStore Parse(std::string_view bytes);
  static ContextualStore Load(const std::filesystem::path &path);

  std::string Serialize() const;
  void Save(const std::filesystem::path &path) const;

  // Appends a sentence; `vectors` holds count x dim floats.
  void Add(const std::string &id, std::span<const float> vectors);

  int dim() const { return dim_; }
  size_t num_sentences() const { return order_.size(); }
  const std::vector<std::string> &ids() const { return order_; }
  bool Contains(const std::string &id) const { return index_.count(id) > 0; }
  int TokenCount(const std::string &id) const;

  // Throws DataError when the sentence or token is missing.
  std::span<const float> Vector(const std::string &id, int token) const;

 private:
  struct Entry {
    size_t offset;
    int count;
  };
  int dim_ = 0;
  std::vector<std::string> order_;
  std::unordered_map<std::string, Entry> index_;
  std::vector<float> data_;
};

enum class WordSource { kStatic, kContextual };
enum class ConceptSource { kStatic, kNone };

struct EmbeddingConfig {
  WordSource word_source = WordSource::kStatic;
  ConceptSource concept_source = ConceptSource::kStatic;
  // Recorded for provenance; pooling and layer choice happen at extraction.
  std::string pooling = "span-average";
  std::string layer = "penultimate";
};

std::string_view WordSourceName(WordSource source);
std::string_view ConceptSourceName(ConceptSource source);
WordSource ParseWordSource(std::string_view name);
ConceptSource ParseConceptSource(std::string_view name);

// The vectors a feature extractor reads.
struct Embeddings {
  EmbeddingConfig config;
  std::shared_ptr<const StaticTable> table;          // required
  std::shared_ptr<const ContextualStore> contextual;  // contextual source

  int word_dim() const;
  int concept_dim() const;

  // Static: table row by TokenIndex. Contextual: the stored vector.
  std::span<const float> TokenVector(const std::string &sentence_id,
                                     const Token &token) const;
  // Static: table row by ConceptIndex. None: zeros.
  std::vector<float> ConceptVector(std::string_view concept_label) const;
};

}  // namespace amreager

#endif  // AMREAGER_EMBEDDINGS_H_
