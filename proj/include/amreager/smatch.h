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

// Smatch: F1 over graph triples under the best injective mapping between the
// variables of two graphs. The mapping is searched by steepest-ascent hill
// climbing over single-variable reassignments and swaps, restarted from a
// concept-matching seed and then from random mappings. An exhaustive search
// is provided for small graphs.
//
// Graphs are compared after inverse-edge normalization. Concepts are
// compared case-insensitively; numeric constants by value ("4" == "4.0");
// string constants with and without quotes are equal.

#ifndef AMREAGER_SMATCH_H_
#define AMREAGER_SMATCH_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "amreager/graph.h"

namespace amreager {

struct SmatchResult {
  long matched = 0;
  long total_a = 0;  // triples in the first (predicted) graph
  long total_b = 0;  // triples in the second (gold) graph
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  // Precision and recall are 0 when their denominator is 0, except when
  // both sides are empty, which scores 1 (nothing to find, nothing wrong).
  static SmatchResult FromCounts(long matched, long total_a, long total_b);

  SmatchResult &operator+=(const SmatchResult &other);
};

struct SmatchOptions {
  int restarts = 4;
  uint64_t seed = 0;
};

SmatchResult Smatch(const AmrGraph &a, const AmrGraph &b,
                    const SmatchOptions &options = {});

// Exhaustive search over every partial injective mapping. Throws
// std::invalid_argument when either side has more than kExactLimit
// variables.
inline constexpr int kExactLimit = 8;
SmatchResult SmatchExact(const AmrGraph &a, const AmrGraph &b);

// Triple-level entry points, used for the restricted fine-grained metrics.
SmatchResult SmatchTriples(std::span<const Triple> a, std::span<const Triple> b,
                           const SmatchOptions &options = {});
SmatchResult SmatchTriplesExact(std::span<const Triple> a,
                                std::span<const Triple> b);

// Normalized, canonicalized triples as scored.
std::vector<Triple> ScoringTriples(const AmrGraph &graph);

// Metric names, in report order.
inline constexpr const char *kMetricNames[] = {
    "Smatch",   "Unlabeled",    "No WSD",    "Reentrancy", "Concepts",
    "Named Ent.", "Wikification", "Negations", "SRL"};

// All metrics for one pair:
//   Smatch        plain Smatch
//   Unlabeled     every relation label replaced by one dummy label
//   No WSD        sense suffixes (-01) stripped from concepts
//   Reentrancy    Smatch on reentrant nodes, their parents and the edges
//                 into the reentrant nodes
//   Concepts      F1 of the concept multisets, no mapping
//   Named Ent.    Smatch on :name edges, entity and name instances and the
//                 name's attributes
//   Wikification  F1 of the :wiki value multisets
//   Negations     F1 of the multisets of concepts carrying :polarity -
//   SRL           Smatch on :ARGn relations and their endpoint instances
std::map<std::string, SmatchResult> FineGrained(const AmrGraph &a,
                                                const AmrGraph &b,
                                                const SmatchOptions &options = {});

struct ScoredPair {
  std::string id;
  const AmrGraph *predicted;
  const AmrGraph *gold;
};

struct CorpusReport {
  std::map<std::string, SmatchResult> metrics;  // micro-averaged
  int pairs = 0;
  std::vector<std::string> errors;

  // Aligned text table, percentages with one decimal.
  std::string ToTable() const;
  // One JSON record per line: {"metric", "precision", "recall", "f1"}.
  std::string ToJsonLines() const;
};

// Micro-averages every requested metric (all when `metrics` is empty).
CorpusReport CorpusScore(std::span<const ScoredPair> pairs,
                         const std::vector<std::string> &metrics = {},
                         const SmatchOptions &options = {});

}  // namespace amreager

#endif  // AMREAGER_SMATCH_H_
