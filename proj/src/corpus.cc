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

#include "amreager/corpus.h"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "amreager/aligner.h"
#include "amreager/errors.h"

namespace amreager {

namespace {

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> parts;
  std::istringstream in{std::string(s)};
  std::string part;
  while (in >> part) parts.push_back(part);
  return parts;
}

// "# ::id a ::date b" -> {id: a, date: b}.
void ParseMetadata(std::string_view line,
                   std::map<std::string, std::string> *fields) {
  size_t pos = line.find("::");
  while (pos != std::string_view::npos) {
    size_t next = pos + 2;
    while (true) {
      next = line.find("::", next);
      if (next == std::string_view::npos) break;
      if (std::isspace(static_cast<unsigned char>(line[next - 1]))) break;
      next += 2;
    }
    std::string_view field = line.substr(
        pos + 2, next == std::string_view::npos ? line.size() - pos - 2
                                                : next - pos - 2);
    size_t space = field.find_first_of(" \t");
    std::string key(field.substr(0, space));
    std::string value(space == std::string_view::npos
                          ? std::string_view()
                          : Trim(field.substr(space)));
    if (!key.empty()) (*fields)[key] = value;
    pos = next;
  }
}

bool ParseInt(std::string_view s, int *value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

bool Alignment::Add(NodeId node, int token) {
  if (TokenOf(node)) return false;
  pairs_.emplace_back(node, token);
  return true;
}

void Alignment::Remove(NodeId node) {
  pairs_.erase(std::remove_if(pairs_.begin(), pairs_.end(),
                              [node](const auto &p) { return p.first == node; }),
               pairs_.end());
}

std::optional<int> Alignment::TokenOf(NodeId node) const {
  for (const auto &[n, t] : pairs_) {
    if (n == node) return t;
  }
  return std::nullopt;
}

std::vector<NodeId> Alignment::NodesOf(int token) const {
  std::vector<NodeId> nodes;
  for (const auto &[n, t] : pairs_) {
    if (t == token) nodes.push_back(n);
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

std::string LoadError::ToString() const {
  return "block " + std::to_string(block) + " (line " + std::to_string(line) +
         "): " + message;
}

AmrBank ParseAmrBank(std::string_view text) {
  AmrBank bank;
  std::vector<std::string_view> lines = SplitLines(text);
  int block = 0;
  size_t i = 0;
  while (i < lines.size()) {
    while (i < lines.size() && Trim(lines[i]).empty()) ++i;
    if (i >= lines.size()) break;
    const int first_line = static_cast<int>(i) + 1;
    std::map<std::string, std::string> metadata;
    std::string penman;
    int penman_line = 0;
    for (; i < lines.size() && !Trim(lines[i]).empty(); ++i) {
      std::string_view line = lines[i];
      if (Trim(line).starts_with("#")) {
        ParseMetadata(line, &metadata);
        continue;
      }
      if (penman_line == 0) penman_line = static_cast<int>(i) + 1;
      penman += line;
      penman += '\n';
    }
    if (penman.empty()) continue;  // comment-only block, e.g. a file header
    const int index = block++;
    try {
      AmrRecord record;
      record.parse = ParsePenmanWithPaths(penman);
      record.penman = std::string(Trim(penman));
      record.line = first_line;
      record.id = metadata.count("id") ? metadata["id"]
                                       : "block-" + std::to_string(index);
      if (metadata.count("snt")) record.sentence = metadata["snt"];
      if (metadata.count("tok")) {
        record.tokens = SplitWhitespace(metadata["tok"]);
      }
      if (metadata.count("alignments")) {
        record.alignments = metadata["alignments"];
      }
      bank.records.push_back(std::move(record));
    } catch (const PenmanError &e) {
      int line = penman_line + static_cast<int>(std::count(
                                   penman.begin(),
                                   penman.begin() + std::min(e.offset(),
                                                             penman.size()),
                                   '\n'));
      bank.errors.push_back({index, line, e.what()});
    }
  }
  return bank;
}

AmrBank LoadAmrFile(const std::filesystem::path &path) {
  return ParseAmrBank(ReadFile(path));
}

std::string FormatAmrBlock(const std::string &id, const std::string &sentence,
                           const AmrGraph &graph,
                           const std::vector<std::string> *tokens,
                           const std::string *alignments) {
  std::string out = "# ::id " + id + "\n# ::snt " + sentence + "\n";
  if (tokens != nullptr) {
    out += "# ::tok";
    for (const std::string &t : *tokens) out += " " + t;
    out += "\n";
  }
  if (alignments != nullptr) out += "# ::alignments " + *alignments + "\n";
  out += SerializePenman(graph, PenmanStyle::kIndented);
  out += "\n\n";
  return out;
}

std::string CollapseNerTag(std::string_view tag) {
  static const std::map<std::string, std::string> kTable = {
      {"PER", "PER"},          {"PERSON", "PER"},
      {"ORG", "ORG"},          {"ORGANIZATION", "ORG"},
      {"LOC", "LOC"},          {"LOCATION", "LOC"},
      {"GPE", "LOC"},          {"CITY", "LOC"},
      {"COUNTRY", "LOC"},      {"STATE_OR_PROVINCE", "LOC"},
      {"FAC", "LOC"},          {"MISC", "MISC"},
      {"NORP", "MISC"},        {"NATIONALITY", "MISC"},
      {"RELIGION", "MISC"},    {"EVENT", "MISC"},
      {"WORK_OF_ART", "MISC"}, {"PRODUCT", "MISC"},
      {"LAW", "MISC"},         {"LANGUAGE", "MISC"},
      {"TITLE", "MISC"},       {"IDEOLOGY", "MISC"},
  };
  std::string upper;
  for (char c : tag) upper.push_back(static_cast<char>(std::toupper(c)));
  if (upper.size() > 2 && (upper[1] == '-') &&
      (upper[0] == 'B' || upper[0] == 'I' || upper[0] == 'E' ||
       upper[0] == 'S')) {
    upper = upper.substr(2);
  }
  auto it = kTable.find(upper);
  // Numeric and temporal classes (DATE, NUMBER, MONEY, ...) carry no
  // entity name in the graph.
  return it == kTable.end() ? "O" : it->second;
}

std::map<std::string, TokenizedSentence> ParseConllu(std::string_view text) {
  std::map<std::string, TokenizedSentence> result;
  std::vector<std::string_view> lines = SplitLines(text);
  TokenizedSentence current;
  bool has_id = false;
  int sentence_line = 0;

  auto finish = [&]() {
    if (current.tokens.empty()) {
      has_id = false;
      current = {};
      return;
    }
    const std::string where = "sentence at line " + std::to_string(sentence_line);
    if (!has_id) throw DataError(where + " has no '# sent_id' comment");
    const int n = static_cast<int>(current.tokens.size());
    int roots = 0;
    for (const Token &t : current.tokens) {
      if (t.dep_head == -1) ++roots;
      if (t.dep_head < -1 || t.dep_head >= n || t.dep_head == t.index) {
        throw DataError(where + ": head out of range for token " +
                        std::to_string(t.index + 1));
      }
    }
    if (roots != 1) {
      throw DataError(where + ": dependency structure has " +
                      std::to_string(roots) + " roots");
    }
    for (const Token &t : current.tokens) {
      int steps = 0;
      for (int h = t.index; h != -1; h = current.tokens[h].dep_head) {
        if (++steps > n) {
          throw DataError(where + ": dependency cycle through token " +
                          std::to_string(t.index + 1));
        }
      }
    }
    if (result.count(current.id)) {
      throw DataError(where + ": duplicate sent_id '" + current.id + "'");
    }
    std::string id = current.id;
    result.emplace(std::move(id), std::move(current));
    current = {};
    has_id = false;
  };

  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    const std::string where = "line " + std::to_string(i + 1);
    if (Trim(line).empty()) {
      finish();
      continue;
    }
    if (line.starts_with("#")) {
      std::string_view body = Trim(line.substr(1));
      if (body.starts_with("sent_id")) {
        size_t eq = body.find('=');
        current.id = std::string(
            Trim(eq == std::string_view::npos ? body.substr(7)
                                              : body.substr(eq + 1)));
        has_id = true;
      }
      continue;
    }
    std::vector<std::string_view> cols;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string_view::npos
                                            ? std::string_view::npos
                                            : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 10) {
      throw DataError(where + ": expected 10 columns, found " +
                      std::to_string(cols.size()));
    }
    // Multiword ranges and empty nodes are not surface tokens.
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
    int id = 0;
    int head = 0;
    if (!ParseInt(cols[0], &id) || !ParseInt(cols[6], &head)) {
      throw DataError(where + ": non-numeric ID or HEAD");
    }
    if (current.tokens.empty()) sentence_line = static_cast<int>(i) + 1;
    if (id != static_cast<int>(current.tokens.size()) + 1) {
      throw DataError(where + ": token ids must be contiguous from 1");
    }
    Token token;
    token.index = id - 1;
    token.surface = std::string(cols[1]);
    token.lemma = cols[2] == "_" ? std::string(cols[1]) : std::string(cols[2]);
    token.pos = cols[4] != "_" ? std::string(cols[4]) : std::string(cols[3]);
    token.dep_head = head - 1;
    token.dep_label = head == 0 ? "root" : std::string(cols[7]);
    token.ner = "O";
    std::string_view misc = cols[9];
    size_t pos = 0;
    while (pos <= misc.size()) {
      size_t bar = misc.find('|', pos);
      std::string_view item = misc.substr(
          pos, bar == std::string_view::npos ? std::string_view::npos
                                             : bar - pos);
      if (item.starts_with("NER=")) token.ner = CollapseNerTag(item.substr(4));
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
    current.tokens.push_back(std::move(token));
  }
  finish();
  return result;
}

std::map<std::string, TokenizedSentence> LoadConllu(
    const std::filesystem::path &path) {
  try {
    return ParseConllu(ReadFile(path));
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Alignment ParseJamrAlignments(std::string_view text, const PenmanParse &parse,
                              int num_tokens) {
  Alignment alignment;
  for (const std::string &entry : SplitWhitespace(text)) {
    size_t bar = entry.find('|');
    size_t dash = entry.find('-');
    int start = 0;
    int end = 0;
    if (bar == std::string::npos || dash == std::string::npos || dash > bar ||
        !ParseInt(std::string_view(entry).substr(0, dash), &start) ||
        !ParseInt(std::string_view(entry).substr(dash + 1, bar - dash - 1),
                  &end)) {
      throw DataError("malformed alignment '" + entry + "'");
    }
    if (start < 0 || end <= start || end > num_tokens) {
      throw DataError("alignment span '" + entry + "' out of range for " +
                      std::to_string(num_tokens) + " tokens");
    }
    std::string_view paths = std::string_view(entry).substr(bar + 1);
    size_t pos = 0;
    while (pos <= paths.size()) {
      size_t plus = paths.find('+', pos);
      std::string path(paths.substr(
          pos, plus == std::string_view::npos ? std::string_view::npos
                                              : plus - pos));
      auto it = parse.paths.find(path);
      if (it == parse.paths.end()) {
        throw DataError("alignment references nonexistent node path '" + path +
                        "'");
      }
      if (!alignment.Add(it->second, start)) {
        spdlog::debug("node path {} aligned twice; keeping first span", path);
      }
      if (plus == std::string_view::npos) break;
      pos = plus + 1;
    }
  }
  return alignment;
}

std::string FormatJamrAlignments(const Alignment &alignment,
                                 const AmrGraph &graph) {
  std::map<NodeId, std::string> paths = NodePaths(graph);
  std::map<int, std::vector<std::string>> by_token;
  for (const auto &[node, token] : alignment.pairs()) {
    auto it = paths.find(node);
    if (it != paths.end()) by_token[token].push_back(it->second);
  }
  std::string out;
  for (auto &[token, list] : by_token) {
    std::sort(list.begin(), list.end());
    if (!out.empty()) out += " ";
    out += std::to_string(token) + "-" + std::to_string(token + 1) + "|";
    for (size_t i = 0; i < list.size(); ++i) {
      if (i > 0) out += "+";
      out += list[i];
    }
  }
  return out;
}

int ResolveTokenFragments(const AmrGraph &graph, Alignment &alignment) {
  const AmrGraph normalized = NormalizeInverseEdges(graph);
  const int n = static_cast<int>(graph.num_nodes());
  constexpr int kFar = 1 << 20;
  std::vector<int> depth(n, kFar);
  if (normalized.has_root()) {
    std::deque<NodeId> queue = {normalized.root()};
    depth[normalized.root()] = 0;
    while (!queue.empty()) {
      NodeId current = queue.front();
      queue.pop_front();
      for (const Edge &e : normalized.edges()) {
        if (e.source == current && depth[e.target] == kFar) {
          depth[e.target] = depth[current] + 1;
          queue.push_back(e.target);
        }
      }
    }
  }

  std::set<int> tokens;
  for (const auto &[node, token] : alignment.pairs()) tokens.insert(token);
  int removed = 0;
  for (int token : tokens) {
    std::vector<NodeId> nodes = alignment.NodesOf(token);
    if (nodes.size() < 2) continue;
    // Connected components among the nodes of this token.
    std::map<NodeId, int> component;
    int count = 0;
    for (NodeId start : nodes) {
      if (component.count(start)) continue;
      std::vector<NodeId> stack = {start};
      component[start] = count;
      while (!stack.empty()) {
        NodeId current = stack.back();
        stack.pop_back();
        for (const Edge &e : graph.edges()) {
          NodeId other = kNoNode;
          if (e.source == current) other = e.target;
          if (e.target == current) other = e.source;
          if (other == kNoNode || component.count(other)) continue;
          if (!std::binary_search(nodes.begin(), nodes.end(), other)) continue;
          component[other] = count;
          stack.push_back(other);
        }
      }
      ++count;
    }
    if (count < 2) continue;
    std::vector<std::pair<int, NodeId>> best(count, {kFar + 1, kNoNode});
    for (const auto &[node, c] : component) {
      best[c] = std::min(best[c], std::make_pair(depth[node], node));
    }
    int keep = static_cast<int>(
        std::min_element(best.begin(), best.end()) - best.begin());
    for (const auto &[node, c] : component) {
      if (c == keep) continue;
      alignment.Remove(node);
      ++removed;
      spdlog::debug("token {}: dropping disconnected fragment node {}", token,
                    node);
    }
  }
  return removed;
}

ZipResult ZipExamples(const std::vector<AmrRecord> &records,
                      const std::map<std::string, TokenizedSentence> &annotations,
                      const std::map<std::string, std::string> &alignments,
                      const ZipOptions &options) {
  ZipResult result;
  std::set<std::string> seen;
  for (const AmrRecord &record : records) {
    seen.insert(record.id);
    auto it = annotations.find(record.id);
    if (it == annotations.end()) {
      result.errors.push_back("sentence '" + record.id +
                              "' has no CoNLL-U annotation");
      continue;
    }
    const TokenizedSentence &sentence = it->second;
    const int n = static_cast<int>(sentence.tokens.size());
    if (record.tokens && static_cast<int>(record.tokens->size()) != n) {
      result.errors.push_back(
          "sentence '" + record.id + "': ::tok has " +
          std::to_string(record.tokens->size()) + " tokens but CoNLL-U has " +
          std::to_string(n));
      continue;
    }
    AnnotatedExample example;
    example.id = record.id;
    example.text = record.sentence;
    example.sentence = sentence;
    example.graph = record.parse.graph;
    const std::string *jamr = nullptr;
    if (auto a = alignments.find(record.id); a != alignments.end()) {
      jamr = &a->second;
    } else if (record.alignments) {
      jamr = &*record.alignments;
    }
    try {
      if (jamr != nullptr) {
        example.alignment = ParseJamrAlignments(*jamr, record.parse, n);
      } else if (options.align_missing) {
        example.alignment = Align(sentence, example.graph);
      }
    } catch (const DataError &e) {
      result.errors.push_back("sentence '" + record.id + "': " + e.what());
      continue;
    }
    result.fragments_dropped +=
        ResolveTokenFragments(example.graph, example.alignment);
    result.examples.push_back(std::move(example));
  }
  for (const auto &[id, sentence] : annotations) {
    if (!seen.count(id)) {
      result.errors.push_back("annotation '" + id + "' has no AMR graph");
    }
  }
  for (const auto &[id, text] : alignments) {
    if (!seen.count(id)) {
      result.errors.push_back("alignment '" + id + "' has no AMR graph");
    }
  }
  return result;
}

std::map<std::string, std::string> LoadAlignmentFile(
    const std::filesystem::path &path) {
  std::map<std::string, std::string> result;
  int line_number = 0;
  for (std::string_view line : SplitLines(ReadFile(path))) {
    ++line_number;
    if (Trim(line).empty() || line.starts_with("#")) continue;
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_number) +
                      ": expected 'id<TAB>alignments'");
    }
    result[std::string(line.substr(0, tab))] =
        std::string(Trim(line.substr(tab + 1)));
  }
  return result;
}

}  // namespace amreager
