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

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/error.hpp"

namespace lexmeta {

inline std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// One marker phrase. Lemma markers (written "lemma:..." in the files) match
// token lemmas instead of surfaces.
struct Marker {
  std::vector<std::string> words;  // case-folded
  bool lemma = false;

  std::string key() const {
    std::string k = lemma ? "lemma:" : "";
    for (size_t i = 0; i < words.size(); ++i) {
      if (i) k += ' ';
      k += words[i];
    }
    return k;
  }
  std::string phrase() const {
    std::string k;
    for (size_t i = 0; i < words.size(); ++i) {
      if (i) k += ' ';
      k += words[i];
    }
    return k;
  }
};

// Marker inventory for every concept, plus rule-scoped subsets. A scope is a
// rule id; a rule with no registered subset sees the concept's full set.
struct Lexicon {
  struct Policy {
    bool case_fold = true;
    bool lemma_fallback = true;
  };

  Policy policy;
  std::array<std::vector<Marker>, kConceptCount> markers;
  std::map<std::pair<Concept, std::string>, std::set<std::string>> scoped;

  const std::vector<Marker>& of(Concept c) const { return markers[static_cast<int>(c)]; }

  void add(Concept c, const Marker& m) {
    auto& list = markers[static_cast<int>(c)];
    for (const Marker& other : list)
      if (other.key() == m.key()) return;
    list.push_back(m);
  }
};

struct Occurrence {
  Span span;
  std::string key;     // canonical marker key, "lemma:" prefix included
  std::string phrase;  // marker words joined with single spaces
};

namespace detail {

inline Marker parse_marker_line(std::string line, const std::string& where, int lineno) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  size_t first = line.find_first_not_of(" \t");
  size_t last = line.find_last_not_of(" \t");
  Marker m;
  std::string body = first == std::string::npos ? "" : line.substr(first, last - first + 1);
  if (body.rfind("lemma:", 0) == 0) {
    m.lemma = true;
    body = body.substr(6);
  }
  std::string word;
  for (char c : body) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!word.empty()) m.words.push_back(fold_case(word));
      word.clear();
    } else {
      word += c;
    }
  }
  if (!word.empty()) m.words.push_back(fold_case(word));
  if (m.words.empty())
    fail(Errc::malformed_line, where + ":" + std::to_string(lineno) + ": empty marker");
  return m;
}

inline bool parse_bool(const std::string& v) {
  return v == "true" || v == "1" || v == "yes" || v == "on";
}

}  // namespace detail

/// Load a lexicon directory: one "<concept>.txt" per concept (missing files
/// mean an empty set), optional "<concept>.<ruleid>.txt" scoped subsets, '#'
/// comments, and an optional key=value "policy.cfg". Files with other
/// extensions are ignored so verb tables can live alongside.
inline Lexicon load_lexicon(const std::filesystem::path& dir, bool strict = true,
                            std::vector<std::string>* warnings = nullptr) {
  if (!std::filesystem::is_directory(dir))
    fail(Errc::io, "lexicon directory not found: " + dir.string());
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  Lexicon lex;

  auto policy_path = dir / "policy.cfg";
  if (std::filesystem::exists(policy_path)) {
    std::ifstream in(policy_path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      size_t eq = line.find('=');
      if (eq == std::string::npos)
        fail(Errc::format, policy_path.string() + ":" + std::to_string(lineno) +
                               ": expected key=value");
      std::string key = line.substr(first, eq - first);
      std::string value = fold_case(line.substr(eq + 1));
      if (key == "case_fold")
        lex.policy.case_fold = detail::parse_bool(value);
      else if (key == "lemma_fallback")
        lex.policy.lemma_fallback = detail::parse_bool(value);
      else
        warn(policy_path.string() + ": unknown policy key '" + key + "'");
    }
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  struct ScopedFile {
    Concept concept_id;
    std::string scope;
    std::vector<Marker> markers;
    std::string name;
  };
  std::vector<ScopedFile> scoped_files;

  for (const auto& path : files) {
    std::string stem = path.stem().string();  // "<concept>" or "<concept>.<ruleid>"
    std::string concept_name = stem;
    std::string scope;
    if (auto dot = stem.find('.'); dot != std::string::npos) {
      concept_name = stem.substr(0, dot);
      scope = stem.substr(dot + 1);
    }
    auto c = concept_from_string(concept_name);
    if (!c) {
      if (strict) fail(Errc::unknown_concept_file, path.filename().string());
      warn(path.string() + ": not a concept marker file, skipped");
      continue;
    }
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open " + path.string());
    std::vector<Marker> parsed;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string probe = line;
      if (!probe.empty() && probe.back() == '\r') probe.pop_back();
      size_t first = probe.find_first_not_of(" \t");
      if (first != std::string::npos && probe[first] == '#') continue;
      parsed.push_back(detail::parse_marker_line(line, path.filename().string(), lineno));
    }
    if (scope.empty())
      for (const Marker& m : parsed) lex.add(*c, m);
    else
      scoped_files.push_back({*c, scope, std::move(parsed), path.filename().string()});
  }

  // Scoped subsets resolve against the full sets, so check them afterwards.
  for (const ScopedFile& sf : scoped_files) {
    std::set<std::string> keys;
    for (const Marker& m : sf.markers) {
      bool known = false;
      for (const Marker& full : lex.of(sf.concept_id))
        if (full.key() == m.key()) known = true;
      if (!known) {
        if (strict)
          fail(Errc::format, sf.name + ": scoped marker '" + m.key() +
                                 "' is not in the concept's full set");
        warn(sf.name + ": scoped marker '" + m.key() + "' ignored (not in the full set)");
        continue;
      }
      keys.insert(m.key());
    }
    lex.scoped[{sf.concept_id, sf.scope}] = std::move(keys);
  }
  return lex;
}

/// All marker occurrences of one concept in a token sequence. Candidates are
/// matched case-insensitively on surfaces (lemma markers against lemmas when
/// available), then overlaps are resolved longest-match-first, leftmost on
/// ties. A scope filters the resolved list to the rule's subset, which keeps
/// scoped results inside the full-set results.
inline std::vector<Occurrence> find_marker_occurrences(const Lexicon& lex, Concept concept_id,
                                                       const std::vector<Token>& tokens,
                                                       std::string_view scope = {}) {
  const auto& markers = lex.of(concept_id);
  if (markers.empty()) return {};

  const int n = static_cast<int>(tokens.size());
  std::vector<std::string> surfaces(n), lemmas(n);
  for (int i = 0; i < n; ++i) {
    surfaces[i] = lex.policy.case_fold ? fold_case(tokens[i].surface) : tokens[i].surface;
    lemmas[i] = lex.policy.case_fold ? fold_case(tokens[i].lemma) : tokens[i].lemma;
  }

  std::vector<Occurrence> candidates;
  for (const Marker& m : markers) {
    const int len = static_cast<int>(m.words.size());
    if (m.lemma && !lex.policy.lemma_fallback) continue;
    for (int start = 0; start + len <= n; ++start) {
      bool ok = true;
      for (int k = 0; k < len && ok; ++k) {
        const std::string& against = m.lemma ? lemmas[start + k] : surfaces[start + k];
        if (m.lemma && lemmas[start + k].empty()) ok = false;
        else if (against != m.words[k]) ok = false;
      }
      if (ok) candidates.push_back({{start, start + len}, m.key(), m.phrase()});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Occurrence& a, const Occurrence& b) {
    if (a.span.size() != b.span.size()) return a.span.size() > b.span.size();
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    return a.key < b.key;
  });
  std::vector<Occurrence> selected;
  for (const Occurrence& c : candidates) {
    bool clashes = false;
    for (const Occurrence& s : selected)
      if (intersects(c.span, s.span)) {
        clashes = true;
        break;
      }
    if (!clashes) selected.push_back(c);
  }

  if (!scope.empty()) {
    auto it = lex.scoped.find({concept_id, std::string(scope)});
    if (it != lex.scoped.end()) {
      std::erase_if(selected,
                    [&](const Occurrence& o) { return it->second.find(o.key) == it->second.end(); });
    }
  }
  std::sort(selected.begin(), selected.end(),
            [](const Occurrence& a, const Occurrence& b) { return a.span < b.span; });
  return selected;
}

}  // namespace lexmeta
