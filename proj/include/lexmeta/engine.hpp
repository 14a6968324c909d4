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
#include <map>
#include <string>
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/deps.hpp"
#include "lexmeta/error.hpp"
#include "lexmeta/lexicon.hpp"
#include "lexmeta/pattern.hpp"
#include "lexmeta/rules.hpp"
#include "lexmeta/statement.hpp"

namespace lexmeta {

struct EngineOptions {
  // When set, overlap cleanup also resolves partial same-type overlaps by
  // dropping the smaller annotation. Default keeps partial overlaps.
  bool h1_partial_overlap = false;
};

// One modal cue with the class it belongs to. Selection runs over the union
// of the permission, obligation and prohibition sets so a longer cue of one
// class shadows a shorter cue of another on the same tokens.
struct ModalOccurrence {
  Span span;
  Concept cls{};
  std::string phrase;
};

inline std::vector<ModalOccurrence> modal_occurrences(const Lexicon& lex,
                                                      const std::vector<Token>& tokens) {
  const Concept classes[] = {Concept::permission, Concept::obligation, Concept::prohibition};
  const int n = static_cast<int>(tokens.size());
  std::vector<std::string> surfaces(n), lemmas(n);
  for (int i = 0; i < n; ++i) {
    surfaces[i] = lex.policy.case_fold ? fold_case(tokens[i].surface) : tokens[i].surface;
    lemmas[i] = lex.policy.case_fold ? fold_case(tokens[i].lemma) : tokens[i].lemma;
  }
  struct Cand {
    Span span;
    Concept cls;
    std::string key;
    std::string phrase;
  };
  std::vector<Cand> cands;
  for (Concept cls : classes) {
    for (const Marker& m : lex.of(cls)) {
      if (m.lemma && !lex.policy.lemma_fallback) continue;
      const int len = static_cast<int>(m.words.size());
      for (int start = 0; start + len <= n; ++start) {
        bool ok = true;
        for (int k = 0; k < len && ok; ++k) {
          const std::string& against = m.lemma ? lemmas[start + k] : surfaces[start + k];
          if ((m.lemma && lemmas[start + k].empty()) || against != m.words[k]) ok = false;
        }
        if (ok) cands.push_back({{start, start + len}, cls, m.key(), m.phrase()});
      }
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.span.size() != b.span.size()) return a.span.size() > b.span.size();
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    if (a.key != b.key) return a.key < b.key;
    return static_cast<int>(a.cls) < static_cast<int>(b.cls);
  });
  std::vector<ModalOccurrence> selected;
  for (const Cand& c : cands) {
    bool clashes = false;
    for (const ModalOccurrence& s : selected)
      if (intersects(c.span, s.span)) clashes = true;
    if (!clashes) selected.push_back({c.span, c.cls, c.phrase});
  }
  std::sort(selected.begin(), selected.end(),
            [](const ModalOccurrence& a, const ModalOccurrence& b) { return a.span < b.span; });
  return selected;
}

namespace detail {

inline bool object_class_label(const std::string& label) {
  return label == "OBJ" || label == "A-OBJ" || label == "DE-OBJ" || label == "P-OBJ";
}

// Dependency guards for tagged rules: the span's head token must fill the
// grammatical slot the tag names.
inline bool guard_passes(const Statement& s, RuleTag tag, Span span) {
  if (tag == RuleTag::none || tag == RuleTag::pre_action) return true;
  int head = head_token(s, span);
  const DepEdge& edge = s.deps.edges[head];
  switch (tag) {
    case RuleTag::subj:
      return edge.label == "SUJ" && edge.head == s.deps.root;
    case RuleTag::obj_active:
      return object_class_label(edge.label) && !passive_voice(s);
    case RuleTag::obj_passive:
      return object_class_label(edge.label) && passive_voice(s);
    default:
      return true;
  }
}

class OccurrenceCache {
 public:
  OccurrenceCache(const Lexicon& lex, const std::vector<Token>& tokens)
      : lex_(lex), tokens_(tokens) {}

  const std::vector<Occurrence>& get(Concept c, const std::string& scope) {
    std::string key = scope;
    // Scopes without a registered subset resolve to the full set; collapse
    // them onto one cache entry.
    if (!scope.empty() && !lex_.scoped.count({c, scope})) key.clear();
    auto it = cache_.find({static_cast<int>(c), key});
    if (it == cache_.end())
      it = cache_.emplace(std::pair{static_cast<int>(c), key},
                          find_marker_occurrences(lex_, c, tokens_, key))
               .first;
    return it->second;
  }

  MarkerOracle oracle(const std::string& scope) {
    return [this, scope](Concept c) {
      std::vector<Span> spans;
      for (const Occurrence& o : get(c, scope)) spans.push_back(o.span);
      return spans;
    };
  }

 private:
  const Lexicon& lex_;
  const std::vector<Token>& tokens_;
  std::map<std::pair<int, std::string>, std::vector<Occurrence>> cache_;
};

// Same-type overlap cleanup: equal spans collapse onto the earliest
// annotation, contained spans lose to the containing one, and in
// partial-overlap mode the smaller of two crossing spans loses too.
inline void heuristic_same_type(std::vector<Annotation>& anns, const EngineOptions& opts) {
  std::vector<char> dead(anns.size(), 0);
  for (size_t i = 0; i < anns.size(); ++i) {
    for (size_t j = 0; j < anns.size(); ++j) {
      if (i == j || dead[i] || dead[j]) continue;
      if (anns[i].type != anns[j].type) continue;
      const auto& a = anns[i].segments;
      const auto& b = anns[j].segments;
      if (segments_equal(a, b)) {
        dead[std::max(i, j)] = 1;
      } else if (segments_contain(b, a)) {
        dead[i] = 1;
      } else if (opts.h1_partial_overlap && segments_intersect(a, b)) {
        int sa = segments_size(a), sb = segments_size(b);
        size_t loser = sa != sb ? (sa < sb ? i : j)
                                : (a.front().begin != b.front().begin
                                       ? (a.front().begin > b.front().begin ? i : j)
                                       : std::max(i, j));
        dead[loser] = 1;
      }
    }
  }
  std::vector<Annotation> kept;
  for (size_t i = 0; i < anns.size(); ++i)
    if (!dead[i]) kept.push_back(std::move(anns[i]));
  anns = std::move(kept);
}

// Drop phrase details that sit strictly inside a cited reference.
inline void heuristic_inside_reference(std::vector<Annotation>& anns) {
  auto droppable = [](Concept c) {
    return c == Concept::actor || c == Concept::time || c == Concept::location ||
           c == Concept::artifact || c == Concept::condition;
  };
  std::vector<Annotation> kept;
  for (const Annotation& a : anns) {
    bool inside = false;
    if (droppable(a.type))
      for (const Annotation& r : anns)
        if (r.type == Concept::reference && segments_contain(r.segments, a.segments) &&
            !segments_equal(r.segments, a.segments))
          inside = true;
    if (!inside) kept.push_back(a);
  }
  anns = std::move(kept);
}

// When a generic concept and one of its specializations cover the same
// tokens, the specific annotation wins.
inline void heuristic_generalization(std::vector<Annotation>& anns) {
  std::vector<char> dead(anns.size(), 0);
  for (size_t i = 0; i < anns.size(); ++i)
    for (size_t j = 0; j < anns.size(); ++j) {
      if (i == j) continue;
      if (!segments_equal(anns[i].segments, anns[j].segments)) continue;
      if (generalizes(anns[i].type, anns[j].type)) dead[i] = 1;
    }
  std::vector<Annotation> kept;
  for (size_t i = 0; i < anns.size(); ++i)
    if (!dead[i]) kept.push_back(std::move(anns[i]));
  anns = std::move(kept);
}

}  // namespace detail

/// Overlap cleanup passes in pipeline order: same-type collapse, reference
/// interiors, generalization on coextensive spans. Unrelated concepts sharing
/// a span are untouched, so one phrase can carry several readings.
inline void apply_heuristics(std::vector<Annotation>& anns, const EngineOptions& opts = {}) {
  detail::heuristic_same_type(anns, opts);
  detail::heuristic_inside_reference(anns);
  detail::heuristic_generalization(anns);
}

inline Concept classify_statement(const Statement& s, const std::vector<Annotation>& anns,
                                  const Lexicon& lex, const RuleSet& rules) {
  std::vector<ModalOccurrence> modal;
  bool modal_ready = false;
  for (const StatementRule& rule : rules.statement) {
    for (const StatementTest& t : rule.any_of) {
      bool hit = false;
      switch (t.kind) {
        case StatementTest::Kind::annotation:
          for (const Annotation& a : anns)
            if (a.type == t.concept_id) hit = true;
          break;
        case StatementTest::Kind::marker:
          hit = !find_marker_occurrences(lex, t.concept_id, s.tokens).empty();
          break;
        case StatementTest::Kind::modality_with: {
          if (!modal_ready) {
            modal = modal_occurrences(lex, s.tokens);
            modal_ready = true;
          }
          for (const Annotation& a : anns) {
            if (a.type != Concept::modality) continue;
            for (const ModalOccurrence& mo : modal) {
              if (mo.cls != t.concept_id) continue;
              for (Span seg : a.segments)
                if (mo.span.begin >= seg.begin && mo.span.end <= seg.end) hit = true;
            }
          }
          break;
        }
      }
      if (hit) return rule.concept_id;
    }
  }
  return Concept::obligation;
}

/// Runs the full per-statement pipeline: pre-action rules, the action
/// residual, the remaining phrase rules with dependency guards, reference
/// injection, the overlap heuristics, and statement typing.
inline AnnotatedStatement annotate_statement(const Statement& s, const Lexicon& lex,
                                             const RuleSet& rules,
                                             const EngineOptions& opts = {}) {
  detail::OccurrenceCache cache(lex, s.tokens);
  std::vector<Annotation> anns;

  auto run_rule = [&](const PhraseRule& rule, auto&& sink) {
    auto oracle = cache.oracle(rule.id);
    for (const Match& m : match_pattern(rule.pattern, s.tree, oracle))
      sink(s.tree.yield_of(m.target));
  };

  std::vector<Span> carved;
  for (const PhraseRule& rule : rules.phrase) {
    if (rule.tag != RuleTag::pre_action) continue;
    run_rule(rule, [&](Span span) {
      anns.push_back({rule.concept_id, {span}, rule.id});
      carved.push_back(span);
    });
  }

  for (const PhraseRule& rule : rules.phrase) {
    if (rule.concept_id != Concept::action) continue;
    run_rule(rule, [&](Span span) {
      auto segments = subtract_spans(span, carved);
      if (!segments.empty()) anns.push_back({rule.concept_id, segments, rule.id});
    });
  }

  for (const PhraseRule& rule : rules.phrase) {
    if (rule.tag == RuleTag::pre_action || rule.concept_id == Concept::action) continue;
    run_rule(rule, [&](Span span) {
      if (!detail::guard_passes(s, rule.tag, span)) return;
      anns.push_back({rule.concept_id, {span}, rule.id});
    });
  }

  for (Span r : s.references) anns.push_back({Concept::reference, {r}, "input"});

  apply_heuristics(anns, opts);

  sort_annotations(anns);

  AnnotatedStatement out;
  out.id = s.id;
  out.annotations = std::move(anns);
  out.statement_type = classify_statement(s, out.annotations, lex, rules);
  return out;
}

}  // namespace lexmeta
