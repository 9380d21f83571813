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

#ifndef AMREAGER_ALIGNER_H_
#define AMREAGER_ALIGNER_H_

#include "amreager/corpus.h"
#include "amreager/graph.h"

namespace amreager {

// Greedy rule-based node-to-token aligner, used when a corpus ships without
// alignments. Rules run in priority order and never undo an earlier match:
//
//   1. concept (sense suffix stripped) equals the token surface or lemma
//   2. concept and token share a prefix of at least four characters
//   3. named entities: the ":name" ops match consecutive tokens; the entity,
//      its name node and the op strings all align to the first name token
//   4. ":polarity -" aligns to a negation word (not, no, never, n't, without)
//   5. numeric constants align to numerically equal tokens
//
// Within a rule every token is used once; candidates are taken leftmost
// token first, then shallowest node. Each node aligns at most once.
Alignment Align(const TokenizedSentence &sentence, const AmrGraph &graph);

// Fraction of graph nodes that carry an alignment; 0 for an empty graph.
double AlignmentCoverage(const Alignment &alignment, const AmrGraph &graph);

}  // namespace amreager

#endif  // AMREAGER_ALIGNER_H_
