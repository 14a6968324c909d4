// Copyright 2026 The lexmeta authors.
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

#pragma once

#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexmeta/error.hpp"

namespace lexmeta {

// The canonical dependency label set. ROOT marks the main verb.
inline constexpr std::array<std::string_view, 20> kDepLabels = {
    "SUJ",  "OBJ",    "ATS",   "ATO",     "MOD",   "A-OBJ",   "DE-OBJ",
    "P-OBJ", "DET",   "DEP",   "PONCT",   "ROOT",  "DEPCOORD", "COORD",
    "AUXPASS", "AUXCAUS", "AUXTPS", "AFF", "ARG",  "MODREL",
};

inline bool is_canonical_dep_label(std::string_view label) {
  for (auto l : kDepLabels)
    if (l == label) return true;
  return false;
}

inline int dep_label_index(std::string_view label) {
  for (int i = 0; i < static_cast<int>(kDepLabels.size()); ++i)
    if (kDepLabels[i] == label) return i;
  return -1;
}

// Maps scheme-specific relation names onto the canonical set. Canonical
// labels map to themselves, so normalization is idempotent. In lenient mode
// anything unknown collapses to DEP; in strict mode it is an error.
class LabelMap {
 public:
  static LabelMap standard() {
    LabelMap m;
    const std::pair<const char*, const char*> entries[] = {
        {"nsubj", "SUJ"},     {"nsubjpass", "SUJ"},  {"nsubj:pass", "SUJ"},
        {"csubj", "SUJ"},     {"suj", "SUJ"},        {"dobj", "OBJ"},
        {"obj", "OBJ"},       {"iobj", "A-OBJ"},     {"obl", "P-OBJ"},
        {"obl:agent", "P-OBJ"}, {"pobj", "P-OBJ"},   {"det", "DET"},
        {"punct", "PONCT"},   {"ponct", "PONCT"},    {"root", "ROOT"},
        {"auxpass", "AUXPASS"}, {"aux:pass", "AUXPASS"}, {"aux", "AUXTPS"},
        {"aux:tense", "AUXTPS"}, {"aux:caus", "AUXCAUS"}, {"amod", "MOD"},
        {"advmod", "MOD"},    {"nmod", "MOD"},       {"mod", "MOD"},
        {"appos", "MOD"},     {"cc", "COORD"},       {"conj", "DEPCOORD"},
        {"cop", "ATS"},       {"xcomp", "ATO"},      {"ccomp", "DEP"},
        {"case", "DEP"},      {"mark", "DEP"},       {"acl", "MODREL"},
        {"acl:relcl", "MODREL"}, {"expl", "AFF"},    {"arg", "ARG"},
        {"fixed", "DEP"},     {"flat", "DEP"},       {"compound", "DEP"},
        {"dep", "DEP"},
    };
    for (auto [from, to] : entries) m.map_.emplace(from, to);
    return m;
  }

  // File format: one "source=CANONICAL" pair per line, '#' comments.
  static LabelMap from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open label map " + path.string());
    LabelMap m;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      size_t eq = line.find('=');
      if (eq == std::string::npos)
        fail(Errc::format, path.string() + ":" + std::to_string(lineno) + ": expected key=value");
      std::string from = line.substr(first, eq - first);
      std::string to = line.substr(eq + 1);
      while (!from.empty() && std::isspace(static_cast<unsigned char>(from.back()))) from.pop_back();
      size_t tb = to.find_first_not_of(" \t");
      to = tb == std::string::npos ? "" : to.substr(tb);
      while (!to.empty() && std::isspace(static_cast<unsigned char>(to.back()))) to.pop_back();
      if (from.empty() || !is_canonical_dep_label(to))
        fail(Errc::format,
             path.string() + ":" + std::to_string(lineno) + ": target must be a canonical label");
      m.map_.emplace(std::move(from), std::move(to));
    }
    return m;
  }

  std::optional<std::string> normalize(std::string_view label, bool strict) const {
    if (is_canonical_dep_label(label)) return std::string(label);
    std::string folded;
    folded.reserve(label.size());
    for (char c : label) folded += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = map_.find(folded);
    if (it != map_.end()) return it->second;
    if (strict) return std::nullopt;
    return std::string("DEP");
  }

 private:
  std::unordered_map<std::string, std::string> map_;
};

// One tabular row: 1-based token index, head index with 0 meaning root.
struct DepRow {
  int index = 0;
  std::string surface;
  std::string lemma;  // "_" in the carrier format means absent
  std::string pos;
  int head = 0;
  std::string label;
};

// Per-token edge to its head, 0-based; head == -1 only on the root token.
struct DepEdge {
  int head = -1;
  std::string label;
};

struct DependencyGraph {
  std::vector<DepEdge> edges;
  int root = -1;

  int size() const { return static_cast<int>(edges.size()); }
  std::vector<int> dependents_of(int token) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
      if (edges[i].head == token) out.push_back(i);
    return out;
  }
  bool has_dependent_labeled(int token, std::string_view label) const {
    for (int i = 0; i < size(); ++i)
      if (edges[i].head == token && edges[i].label == label) return true;
    return false;
  }
};

/// Parse whitespace-separated rows "index surface lemma pos head label",
/// one token per line, '#' comments allowed.
inline std::vector<DepRow> parse_dependency_rows(std::string_view text) {
  std::vector<DepRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    DepRow row;
    std::string index_s, head_s;
    if (!(fields >> index_s >> row.surface >> row.lemma >> row.pos >> head_s >> row.label))
      fail(Errc::format, "line " + std::to_string(lineno) + ": expected 6 fields");
    try {
      row.index = std::stoi(index_s);
      row.head = std::stoi(head_s);
    } catch (const std::exception&) {
      fail(Errc::format, "line " + std::to_string(lineno) + ": non-numeric index or head");
    }
    if (row.index != static_cast<int>(rows.size()) + 1)
      fail(Errc::format, "line " + std::to_string(lineno) + ": indices must run 1..n");
    if (row.lemma == "_") row.lemma.clear();
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Validate rows and build the per-token graph: exactly one root (head 0,
/// label ROOT after normalization), in-range heads, no cycles.
inline DependencyGraph build_dependency_graph(const std::vector<DepRow>& rows,
                                              const LabelMap& labels, bool strict) {
  const int n = static_cast<int>(rows.size());
  DependencyGraph g;
  g.edges.resize(n);
  for (int i = 0; i < n; ++i) {
    const DepRow& row = rows[i];
    if (row.head < 0 || row.head > n)
      fail(Errc::format, "token " + std::to_string(row.index) + ": head out of range");
    auto label = labels.normalize(row.label, strict);
    if (!label) fail(Errc::unknown_label, "token " + std::to_string(row.index) + ": '" + row.label + "'");
    if (row.head == 0) {
      if (*label != "ROOT")
        fail(Errc::format, "token " + std::to_string(row.index) + ": root row must carry ROOT");
      if (g.root != -1) fail(Errc::multiple_roots, "more than one head-0 row");
      g.root = i;
      g.edges[i] = {-1, *label};
    } else {
      if (*label == "ROOT")
        fail(Errc::multiple_roots, "ROOT label on non-root token " + std::to_string(row.index));
      if (row.head == row.index)
        fail(Errc::cyclic_heads, "token " + std::to_string(row.index) + " heads itself");
      g.edges[i] = {row.head - 1, *label};
    }
  }
  if (n > 0 && g.root == -1) fail(Errc::no_root, "no head-0 row");
  // Every chain of heads must reach the root.
  for (int i = 0; i < n; ++i) {
    int cur = i, steps = 0;
    while (cur != -1) {
      cur = g.edges[cur].head;
      if (++steps > n) fail(Errc::cyclic_heads, "head cycle through token " + std::to_string(i + 1));
    }
  }
  return g;
}

}  // namespace lexmeta
