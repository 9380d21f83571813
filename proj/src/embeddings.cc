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

#include "amreager/embeddings.h"

#include <cstring>

#include <spdlog/spdlog.h>

#include "amreager/errors.h"
#include "amreager/io.h"
#include "amreager/strings.h"

namespace amreager {

StaticTable StaticTable::Parse(std::string_view text) {
  StaticTable table;
  int line_number = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> fields = Split(line, ' ');
    std::erase(fields, std::string());
    if (fields.size() < 2) {
      throw DataError("vector line " + std::to_string(line_number) +
                      ": expected a word and at least one value");
    }
    const int dim = static_cast<int>(fields.size()) - 1;
    if (table.dim_ == 0) table.dim_ = dim;
    if (dim != table.dim_) {
      throw DataError("vector line " + std::to_string(line_number) + ": " +
                      std::to_string(dim) + " values, expected " +
                      std::to_string(table.dim_));
    }
    if (table.index_.count(fields[0])) continue;  // first entry wins
    for (int k = 1; k <= dim; ++k) {
      auto value = ParseNumber(fields[k]);
      if (!value) {
        throw DataError("vector line " + std::to_string(line_number) +
                        ": bad value '" + fields[k] + "'");
      }
      table.data_.push_back(static_cast<float>(*value));
    }
    table.index_.emplace(fields[0], static_cast<int>(table.words_.size()));
    table.words_.push_back(fields[0]);
  }
  if (table.words_.empty()) throw DataError("empty vector table");
  std::vector<double> mean(table.dim_, 0.0);
  for (size_t r = 0; r < table.words_.size(); ++r) {
    for (int k = 0; k < table.dim_; ++k) mean[k] += table.data_[r * table.dim_ + k];
  }
  for (int k = 0; k < table.dim_; ++k) {
    table.data_.push_back(static_cast<float>(mean[k] / table.words_.size()));
  }
  return table;
}

StaticTable StaticTable::Load(const std::filesystem::path &path) {
  try {
    return Parse(ReadFile(path));
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

int StaticTable::Index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? static_cast<int>(size()) : it->second;
}

std::span<const float> StaticTable::Row(int index) const {
  if (index < 0 || index > static_cast<int>(size())) {
    throw std::out_of_range("vector row " + std::to_string(index));
  }
  return std::span<const float>(data_).subspan(static_cast<size_t>(index) * dim_,
                                               dim_);
}

int StaticTable::TokenIndex(const Token &token) const {
  const int unknown_index = static_cast<int>(size());
  int index = Index(Lowercase(token.surface));
  if (index == unknown_index && !token.lemma.empty()) {
    index = Index(Lowercase(token.lemma));
  }
  return index;
}

int StaticTable::ConceptIndex(std::string_view concept_label) const {
  return Index(Lowercase(StripSenseSuffix(concept_label)));
}

ContextualStore ContextualStore::Parse(std::string_view bytes) {
  ByteReader reader(bytes);
  std::string_view magic = reader.GetBytes(4, "magic");
  if (std::memcmp(magic.data(), kContextualMagic, 4) != 0) {
    throw DataError("bad magic at byte 0: not a contextual embedding file");
  }
  const size_t version_offset = reader.offset();
  const uint16_t version = reader.GetU16("format version");
  if (version != kContextualVersion) {
    throw DataError("unsupported format version " + std::to_string(version) +
                    " at byte " + std::to_string(version_offset));
  }
  const uint16_t dim = reader.GetU16("dimension");
  if (dim == 0) throw DataError("zero dimension at byte 6");
  if (dim != 768 && dim != 1024) {
    spdlog::warn("contextual embedding dimension {} (expected 768 or 1024)",
                 dim);
  }
  ContextualStore store(dim);
  while (!reader.done()) {
    const size_t record_offset = reader.offset();
    const uint32_t id_length = reader.GetU32("sentence id length");
    std::string id(reader.GetBytes(id_length, "sentence id"));
    const uint32_t count = reader.GetU32("token count");
    if (store.Contains(id)) {
      throw DataError("duplicate sentence id '" + id + "' at byte " +
                      std::to_string(record_offset));
    }
    const size_t floats = static_cast<size_t>(count) * dim;
    if (floats * 4 > reader.remaining()) {
      throw DataError("truncated input at byte " +
                      std::to_string(reader.offset()) + ": expected " +
                      std::to_string(floats) + " floats for '" + id + "'");
    }
    std::vector<float> vectors(floats);
    for (float &v : vectors) v = reader.GetF32("vector");
    store.Add(id, vectors);
  }
  return store;
}

ContextualStore ContextualStore::Load(const std::filesystem::path &path) {
  try {
    return Parse(ReadFile(path));
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string ContextualStore::Serialize() const {
  ByteWriter writer;
  writer.PutBytes(std::string_view(kContextualMagic, 4));
  writer.PutU16(kContextualVersion);
  writer.PutU16(static_cast<uint16_t>(dim_));
  for (const std::string &id : order_) {
    const Entry &entry = index_.at(id);
    writer.PutU32(static_cast<uint32_t>(id.size()));
    writer.PutBytes(id);
    writer.PutU32(static_cast<uint32_t>(entry.count));
    for (size_t k = 0; k < static_cast<size_t>(entry.count) * dim_; ++k) {
      writer.PutF32(data_[entry.offset + k]);
    }
  }
  return writer.Release();
}

void ContextualStore::Save(const std::filesystem::path &path) const {
  WriteFile(path, Serialize());
}

void ContextualStore::Add(const std::string &id, std::span<const float> vectors) {
  if (dim_ <= 0) throw std::invalid_argument("contextual store without dim");
  if (vectors.size() % dim_ != 0) {
    throw std::invalid_argument("vector block is not a multiple of dim");
  }
  if (!index_.emplace(id, Entry{data_.size(), static_cast<int>(vectors.size() / dim_)})
           .second) {
    throw DataError("duplicate sentence id '" + id + "'");
  }
  order_.push_back(id);
  data_.insert(data_.end(), vectors.begin(), vectors.end());
}

int ContextualStore::TokenCount(const std::string &id) const {
  auto it = index_.find(id);
  return it == index_.end() ? 0 : it->second.count;
}

std::span<const float> ContextualStore::Vector(const std::string &id,
                                               int token) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw DataError("no contextual vectors for sentence '" + id + "'");
  }
  if (token < 0 || token >= it->second.count) {
    throw DataError("no contextual vector for token " + std::to_string(token) +
                    " of sentence '" + id + "'");
  }
  return std::span<const float>(data_).subspan(
      it->second.offset + static_cast<size_t>(token) * dim_, dim_);
}

std::string_view WordSourceName(WordSource source) {
  return source == WordSource::kStatic ? "static" : "contextual";
}

std::string_view ConceptSourceName(ConceptSource source) {
  return source == ConceptSource::kStatic ? "static" : "none";
}

WordSource ParseWordSource(std::string_view name) {
  if (name == "static") return WordSource::kStatic;
  if (name == "contextual") return WordSource::kContextual;
  throw DataError("unknown word source '" + std::string(name) + "'");
}

ConceptSource ParseConceptSource(std::string_view name) {
  if (name == "static") return ConceptSource::kStatic;
  if (name == "none") return ConceptSource::kNone;
  throw DataError("unknown concept source '" + std::string(name) + "'");
}

int Embeddings::word_dim() const {
  if (config.word_source == WordSource::kContextual) {
    if (!contextual) throw DataError("contextual word source without a store");
    return contextual->dim();
  }
  return table->dim();
}

int Embeddings::concept_dim() const { return table->dim(); }

std::span<const float> Embeddings::TokenVector(const std::string &sentence_id,
                                               const Token &token) const {
  if (config.word_source == WordSource::kContextual) {
    if (!contextual) throw DataError("contextual word source without a store");
    return contextual->Vector(sentence_id, token.index);
  }
  return table->Row(table->TokenIndex(token));
}

std::vector<float> Embeddings::ConceptVector(std::string_view concept_label) const {
  if (config.concept_source == ConceptSource::kNone) {
    return std::vector<float>(concept_dim(), 0.0f);
  }
  std::span<const float> row = table->Row(table->ConceptIndex(concept_label));
  return std::vector<float>(row.begin(), row.end());
}

}  // namespace amreager
