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

// Corpus ingestion: AMR banks with "# ::" metadata headers, CoNLL-U
// annotation files, and JAMR span alignments.

#ifndef AMREAGER_CORPUS_H_
#define AMREAGER_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amreager/graph.h"
#include "amreager/penman.h"

namespace amreager {

struct Token {
  int index = 0;
  std::string surface;
  std::string lemma;
  std::string pos;
  std::string ner = "O";
  int dep_head = -1;  // -1 for the dependency root
  std::string dep_label;
};

struct TokenizedSentence {
  std::string id;
  std::vector<Token> tokens;
};

// Node-to-token alignment. Each node aligns to at most one token; a token
// may carry any number of nodes.
class Alignment {
 public:
  // Returns false (and changes nothing) if the node is already aligned.
  bool Add(NodeId node, int token);
  void Remove(NodeId node);

  std::optional<int> TokenOf(NodeId node) const;
  std::vector<NodeId> NodesOf(int token) const;
  const std::vector<std::pair<NodeId, int>> &pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }
  size_t size() const { return pairs_.size(); }

 private:
  std::vector<std::pair<NodeId, int>> pairs_;
};

// One block of an AMR bank file.
struct AmrRecord {
  std::string id;
  std::string sentence;                             // "::snt"
  std::optional<std::vector<std::string>> tokens;   // "::tok"
  std::optional<std::string> alignments;            // "::alignments", raw
  std::string penman;                               // text as written
  PenmanParse parse;
  int line = 0;                                     // first line of block
};

struct LoadError {
  int block = 0;  // zero-based block index
  int line = 0;   // one-based line number
  std::string message;

  std::string ToString() const;
};

struct AmrBank {
  std::vector<AmrRecord> records;
  std::vector<LoadError> errors;
};

// Malformed blocks are reported in `errors` and skipped; loading continues.
AmrBank ParseAmrBank(std::string_view text);
AmrBank LoadAmrFile(const std::filesystem::path &path);

// Writes one block: "# ::id", "# ::snt", optional "# ::tok" and
// "# ::alignments" headers, then the graph.
std::string FormatAmrBlock(const std::string &id, const std::string &sentence,
                           const AmrGraph &graph,
                           const std::vector<std::string> *tokens = nullptr,
                           const std::string *alignments = nullptr);

// Maps a tagger's entity label (PERSON, B-LOC, GPE, ...) to the closed set
// {PER, ORG, LOC, MISC, O}.
std::string CollapseNerTag(std::string_view tag);

// Reads CoNLL-U. Sentence ids come from "# sent_id = ..." comments and the
// entity tag from the "NER=" key of the MISC column (O when absent).
// Throws DataError for malformed rows or non-tree dependencies.
std::map<std::string, TokenizedSentence> ParseConllu(std::string_view text);
std::map<std::string, TokenizedSentence> LoadConllu(
    const std::filesystem::path &path);

// Parses JAMR span alignments ("3-5|0.1+0.1.0 0-1|0"). Each node aligns to
// the first token of its span; nodes listed twice keep the first span.
// Throws DataError for unknown node paths or tokens out of range.
Alignment ParseJamrAlignments(std::string_view text, const PenmanParse &parse,
                              int num_tokens);

// Inverse of ParseJamrAlignments using the paths of SerializePenman.
std::string FormatJamrAlignments(const Alignment &alignment,
                                 const AmrGraph &graph);

struct AnnotatedExample {
  std::string id;
  std::string text;  // raw sentence
  TokenizedSentence sentence;
  AmrGraph graph;
  Alignment alignment;
};

struct ZipOptions {
  // Align with the heuristic aligner when no JAMR alignment is available.
  bool align_missing = true;
};

struct ZipResult {
  std::vector<AnnotatedExample> examples;
  std::vector<std::string> errors;
  int fragments_dropped = 0;
};

// Joins AMR records with annotations and alignments by sentence id.
// `alignments` overrides the records' own "::alignments" lines.
ZipResult ZipExamples(const std::vector<AmrRecord> &records,
                      const std::map<std::string, TokenizedSentence> &annotations,
                      const std::map<std::string, std::string> &alignments,
                      const ZipOptions &options = {});

// When one token carries nodes from several disconnected fragments, keeps
// the fragment whose top node is closest to the root and unaligns the
// rest. Returns the number of nodes unaligned.
int ResolveTokenFragments(const AmrGraph &graph, Alignment &alignment);

// Reads "id<TAB>jamr alignment" lines.
std::map<std::string, std::string> LoadAlignmentFile(
    const std::filesystem::path &path);

}  // namespace amreager

#endif  // AMREAGER_CORPUS_H_
