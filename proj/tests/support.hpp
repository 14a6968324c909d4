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

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lexmeta/statement.hpp"
#include "lexmeta/tree.hpp"

namespace testsupport {

template <class F>
inline bool throws_code(F&& f, lexmeta::Errc expected) {
  try {
    f();
  } catch (const lexmeta::Error& e) {
    return e.code() == expected;
  }
  return false;
}

inline std::filesystem::path source_dir() { return LEXMETA_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }

inline std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "lexmeta_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_file(const std::string& name, const std::string& content) {
  auto path = temp_dir() / name;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out << content;
  return path;
}

// Build a statement from a bracketed tree plus per-token (head, label) pairs
// (1-based heads, 0 for root). With no pairs given, token 1 becomes the root
// and everything else attaches to it as DEP.
struct StmtSpec {
  std::string id = "s";
  std::string tree;
  std::vector<std::pair<int, std::string>> deps;  // aligned with tokens
  std::map<int, std::string> lemmas;              // token index -> lemma
  std::map<int, std::string> pos;                 // token index -> tag
  std::vector<lexmeta::Span> references;
};

inline lexmeta::Statement make_statement(const StmtSpec& spec) {
  lexmeta::Statement s;
  s.id = spec.id;
  s.tree = lexmeta::parse_bracketed(spec.tree);
  for (int i = 0; i < s.tree.num_tokens(); ++i) {
    lexmeta::Token t;
    t.index = i;
    t.surface = s.tree.words[i];
    if (auto it = spec.lemmas.find(i); it != spec.lemmas.end()) t.lemma = it->second;
    if (auto it = spec.pos.find(i); it != spec.pos.end()) t.pos = it->second;
    if (!s.text.empty()) s.text += ' ';
    s.text += t.surface;
    s.tokens.push_back(std::move(t));
  }
  std::vector<lexmeta::DepRow> rows;
  for (int i = 0; i < static_cast<int>(s.tokens.size()); ++i) {
    lexmeta::DepRow r;
    r.index = i + 1;
    r.surface = s.tokens[i].surface;
    r.lemma = s.tokens[i].lemma;
    r.pos = s.tokens[i].pos;
    if (spec.deps.empty()) {
      r.head = i == 0 ? 0 : 1;
      r.label = i == 0 ? "ROOT" : "DEP";
    } else {
      r.head = spec.deps[i].first;
      r.label = spec.deps[i].second;
    }
    rows.push_back(std::move(r));
  }
  s.deps = lexmeta::build_dependency_graph(rows, lexmeta::LabelMap::standard(), true);
  s.references = spec.references;
  lexmeta::validate_statement(s);
  return s;
}

// Random bracketed trees for structural properties and the matcher oracle.
// node_budget bounds the number of labeled nodes, not tokens.
class TreeGen {
 public:
  TreeGen(std::uint64_t seed, int node_budget, std::vector<std::string> vocab)
      : rng_(seed), budget_(node_budget), vocab_(std::move(vocab)) {}

  std::string next() {
    remaining_ = 1 + static_cast<int>(rng_() % static_cast<std::uint64_t>(budget_));
    std::string out;
    emit_node(out);
    return out;
  }

 private:
  static constexpr const char* kLabels[] = {"NP", "PP",   "VP",    "VN", "Srel", "Ssub",
                                            "VPinf", "VPart", "P",  "D",  "N",    "V",  "X"};

  void emit_node(std::string& out) {
    --remaining_;
    out += '(';
    out += kLabels[rng_() % (sizeof(kLabels) / sizeof(kLabels[0]))];
    int parts = 1 + static_cast<int>(rng_() % 3);
    for (int i = 0; i < parts; ++i) {
      out += ' ';
      if (remaining_ > 0 && rng_() % 2 == 0)
        emit_node(out);
      else
        out += vocab_[rng_() % vocab_.size()];
    }
    out += ')';
  }

  std::mt19937_64 rng_;
  int budget_ = 0;
  int remaining_ = 0;
  std::vector<std::string> vocab_;
};

}  // namespace testsupport
