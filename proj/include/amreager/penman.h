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

// Reading and writing graphs in PENMAN notation:
//
//   (w / want-01
//      :ARG0 (d / dog)
//      :ARG1 (e / eat-01 :ARG0 d))
//
// A bare symbol in value position refers to a variable when one with that
// name is defined anywhere in the expression, otherwise it is a constant.
// Variable-shaped symbols (a letter plus optional digits) that are never
// defined are rejected as dangling references.

#ifndef AMREAGER_PENMAN_H_
#define AMREAGER_PENMAN_H_

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "amreager/graph.h"

namespace amreager {

// Syntax error with the byte offset where it was detected.
class PenmanError : public std::runtime_error {
 public:
  PenmanError(const std::string &message, size_t offset);
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

AmrGraph ParsePenman(std::string_view text);

// Parse result that also keeps the tree address of every node occurrence,
// in the dotted form used by JAMR alignments: the root is "0" and the k-th
// relation of a node at path p (counting from zero, in textual order,
// references and constants included) is "p.k".
struct PenmanParse {
  AmrGraph graph;
  std::map<std::string, NodeId> paths;
};

PenmanParse ParsePenmanWithPaths(std::string_view text);

enum class PenmanStyle { kSingleLine, kIndented };

// Deterministic serialization. Children are ordered by (label, node id);
// nodes that can only be reached against edge direction are written with
// inverted ("-of") relations. Throws GraphError if some node stays
// unreachable from the root.
std::string SerializePenman(const AmrGraph &graph,
                            PenmanStyle style = PenmanStyle::kSingleLine);

// Tree address of each node in the layout SerializePenman produces, so
// ParsePenmanWithPaths(SerializePenman(g)).paths agrees with this map.
std::map<NodeId, std::string> NodePaths(const AmrGraph &graph);

// Writes a constant or concept, quoting it when a bare symbol would not
// read back as the same value.
std::string FormatAtom(std::string_view value, bool quoted);

}  // namespace amreager

#endif  // AMREAGER_PENMAN_H_
