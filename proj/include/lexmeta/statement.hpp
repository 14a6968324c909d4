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

#include <string>
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/deps.hpp"
#include "lexmeta/error.hpp"
#include "lexmeta/tree.hpp"

namespace lexmeta {

// One legal statement with its full linguistic signal: tokens, constituency
// parse and dependency graph, plus an optional externally supplied layer of
// reference spans (citations to other provisions).
struct Statement {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  ConstituencyTree tree;
  DependencyGraph deps;
  std::vector<Span> references;
};

/// Cross-check the three layers: tree leaves and dependency rows must line up
/// with the token sequence one for one.
inline void validate_statement(const Statement& s) {
  if (s.tree.num_tokens() != static_cast<int>(s.tokens.size()))
    fail(Errc::alignment, s.id + ": tree has " + std::to_string(s.tree.num_tokens()) +
                              " leaves for " + std::to_string(s.tokens.size()) + " tokens");
  for (size_t i = 0; i < s.tokens.size(); ++i)
    if (s.tree.words[i] != s.tokens[i].surface)
      fail(Errc::alignment, s.id + ": leaf " + std::to_string(i) + " is '" + s.tree.words[i] +
                                "' but token is '" + s.tokens[i].surface + "'");
  if (s.deps.size() != static_cast<int>(s.tokens.size()))
    fail(Errc::alignment, s.id + ": dependency rows do not cover the token sequence");
  for (const Span& r : s.references)
    if (r.begin < 0 || r.end > static_cast<int>(s.tokens.size()) || r.empty())
      fail(Errc::alignment, s.id + ": reference span out of bounds");
}

inline int main_verb(const Statement& s) { return s.deps.root; }

// Passive voice: the main verb carries a passive-auxiliary dependent.
inline bool passive_voice(const Statement& s) {
  return s.deps.root >= 0 && s.deps.has_dependent_labeled(s.deps.root, "AUXPASS");
}

/// Head token of a constituent span: the unique token whose dependency head
/// lies outside the span. Falls back to the leftmost such candidate, then to
/// the leftmost token.
inline int head_token(const Statement& s, Span span) {
  int first_candidate = -1;
  int count = 0;
  for (int t = span.begin; t < span.end; ++t) {
    int h = s.deps.edges[t].head;
    bool outside = h < 0 || h < span.begin || h >= span.end;
    if (outside) {
      if (first_candidate == -1) first_candidate = t;
      ++count;
    }
  }
  if (count == 1) return first_candidate;
  if (count > 1) return first_candidate;
  return span.begin;
}

}  // namespace lexmeta
