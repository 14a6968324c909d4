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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexmeta/error.hpp"

namespace lexmeta {

// Half-open token range [begin, end).
struct Span {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

inline bool contains(Span outer, Span inner) {
  return outer.begin <= inner.begin && inner.end <= outer.end;
}

inline bool intersects(Span a, Span b) {
  return std::max(a.begin, b.begin) < std::min(a.end, b.end);
}

// The annotation vocabulary: phrase-level concepts first, statement-level last.
enum class Concept : std::uint8_t {
  action,
  actor,
  agent,
  target,
  auxiliary_party,
  artifact,
  condition,
  constraint,
  exception,
  location,
  modality,
  reason,
  reference,
  result,
  sanction,
  situation,
  time,
  violation,
  fact,
  definition,
  obligation,
  penalty,
  permission,
  prohibition,
};

inline constexpr int kConceptCount = 24;
inline constexpr int kPhraseConceptCount = 18;

inline constexpr std::array<std::string_view, kConceptCount> kConceptNames = {
    "action",     "actor",      "agent",     "target",     "auxiliary_party",
    "artifact",   "condition",  "constraint", "exception", "location",
    "modality",   "reason",     "reference", "result",     "sanction",
    "situation",  "time",       "violation", "fact",       "definition",
    "obligation", "penalty",    "permission", "prohibition",
};

inline std::string_view to_string(Concept c) {
  return kConceptNames[static_cast<int>(c)];
}

inline std::optional<Concept> concept_from_string(std::string_view name) {
  for (int i = 0; i < kConceptCount; ++i)
    if (kConceptNames[i] == name) return static_cast<Concept>(i);
  return std::nullopt;
}

inline bool is_statement_level(Concept c) {
  return static_cast<int>(c) >= kPhraseConceptCount;
}

inline bool is_phrase_level(Concept c) { return !is_statement_level(c); }

// True when g is a strict generalization of s, following the edges
// sanction -> result -> situation, condition/exception -> constraint,
// violation -> condition, and agent/target/auxiliary_party -> actor,
// closed under transitivity.
inline bool generalizes(Concept g, Concept s) {
  static const auto table = [] {
    std::array<std::array<bool, kConceptCount>, kConceptCount> t{};
    auto edge = [&t](Concept general, Concept specific) {
      t[static_cast<int>(general)][static_cast<int>(specific)] = true;
    };
    edge(Concept::result, Concept::sanction);
    edge(Concept::situation, Concept::result);
    edge(Concept::constraint, Concept::condition);
    edge(Concept::constraint, Concept::exception);
    edge(Concept::condition, Concept::violation);
    edge(Concept::actor, Concept::agent);
    edge(Concept::actor, Concept::target);
    edge(Concept::actor, Concept::auxiliary_party);
    for (int k = 0; k < kConceptCount; ++k)
      for (int i = 0; i < kConceptCount; ++i)
        for (int j = 0; j < kConceptCount; ++j)
          if (t[i][k] && t[k][j]) t[i][j] = true;
    return t;
  }();
  return table[static_cast<int>(g)][static_cast<int>(s)];
}

struct Token {
  int index = 0;
  std::string surface;
  std::string lemma;  // empty when not provided
  std::string pos;
};

// One annotated text region. Segments are non-empty, pairwise disjoint and
// ascending; only action annotations may carry more than one segment.
struct Annotation {
  Concept type = Concept::action;
  std::vector<Span> segments;
  std::string rule;  // producing rule id, or "input" for supplied layers
  bool cannot_classify = false;

  Span bounds() const {
    return segments.empty() ? Span{} : Span{segments.front().begin, segments.back().end};
  }
};

// Canonical annotation order: span start, concept name, span end, rule id.
// Output written in this order stays byte-stable however it was produced.
inline void sort_annotations(std::vector<Annotation>& anns) {
  std::sort(anns.begin(), anns.end(), [](const Annotation& a, const Annotation& b) {
    Span ab = a.bounds(), bb = b.bounds();
    if (ab.begin != bb.begin) return ab.begin < bb.begin;
    if (a.type != b.type) return to_string(a.type) < to_string(b.type);
    if (ab.end != bb.end) return ab.end < bb.end;
    return a.rule < b.rule;
  });
}

// Merge a sorted-or-not segment list into maximal disjoint ascending spans.
inline std::vector<Span> normalize_segments(std::vector<Span> segs) {
  segs.erase(std::remove_if(segs.begin(), segs.end(), [](Span s) { return s.empty(); }),
             segs.end());
  std::sort(segs.begin(), segs.end());
  std::vector<Span> out;
  for (Span s : segs) {
    if (!out.empty() && s.begin <= out.back().end)
      out.back().end = std::max(out.back().end, s.end);
    else
      out.push_back(s);
  }
  return out;
}

inline int segments_size(const std::vector<Span>& segs) {
  int n = 0;
  for (Span s : segs) n += s.size();
  return n;
}

// Token-set containment over normalized segment lists.
inline bool segments_contain(const std::vector<Span>& outer, const std::vector<Span>& inner) {
  for (Span s : inner) {
    bool covered = false;
    for (Span o : outer)
      if (contains(o, s)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

inline bool segments_intersect(const std::vector<Span>& a, const std::vector<Span>& b) {
  for (Span x : a)
    for (Span y : b)
      if (intersects(x, y)) return true;
  return false;
}

inline bool segments_equal(const std::vector<Span>& a, const std::vector<Span>& b) {
  return normalize_segments(a) == normalize_segments(b);
}

// Remove every range in cuts from the base span, yielding the maximal
// leftover segments in ascending order.
inline std::vector<Span> subtract_spans(Span base, std::vector<Span> cuts) {
  cuts = normalize_segments(std::move(cuts));
  std::vector<Span> out;
  int pos = base.begin;
  for (Span c : cuts) {
    if (c.end <= base.begin || c.begin >= base.end) continue;
    if (c.begin > pos) out.push_back({pos, std::min(c.begin, base.end)});
    pos = std::max(pos, c.end);
  }
  if (pos < base.end) out.push_back({pos, base.end});
  return out;
}

// A fully processed statement: its classified type plus phrase annotations.
struct AnnotatedStatement {
  std::string id;
  Concept statement_type = Concept::obligation;
  std::vector<Annotation> annotations;
};

}  // namespace lexmeta
