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
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/engine.hpp"
#include "lexmeta/error.hpp"
#include "lexmeta/lexicon.hpp"
#include "lexmeta/statement.hpp"

namespace lexmeta {

enum class Transitivity { transitive, intransitive, both, unknown };

inline std::string_view to_string(Transitivity t) {
  switch (t) {
    case Transitivity::transitive: return "transitive";
    case Transitivity::intransitive: return "intransitive";
    case Transitivity::both: return "both";
    case Transitivity::unknown: return "unknown";
  }
  return "unknown";
}

// Verb transitivity lexicon: one "verb<TAB>class" row per line, '#' comments.
// Lookups try the lemma first, then the surface form, both case-folded.
struct VerbLexicon {
  std::map<std::string, Transitivity> verbs;

  Transitivity of(const Token& t) const {
    if (!t.lemma.empty())
      if (auto it = verbs.find(fold_case(t.lemma)); it != verbs.end()) return it->second;
    if (auto it = verbs.find(fold_case(t.surface)); it != verbs.end()) return it->second;
    return Transitivity::unknown;
  }
};

inline VerbLexicon load_verb_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open verb lexicon " + path.string());
  VerbLexicon lex;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::string where = path.filename().string() + ":" + std::to_string(lineno);
    size_t tab = line.find('\t', first);
    if (tab == std::string::npos) fail(Errc::malformed_line, where + ": expected verb<TAB>class");
    std::string verb = fold_case(line.substr(first, tab - first));
    size_t vb = line.find_first_not_of(" \t", tab);
    std::string cls = vb == std::string::npos ? "" : line.substr(vb);
    while (!cls.empty() && (cls.back() == ' ' || cls.back() == '\t')) cls.pop_back();
    Transitivity t;
    if (cls == "transitive")
      t = Transitivity::transitive;
    else if (cls == "intransitive")
      t = Transitivity::intransitive;
    else if (cls == "both")
      t = Transitivity::both;
    else
      fail(Errc::malformed_line, where + ": unknown class '" + cls + "'");
    if (verb.empty()) fail(Errc::malformed_line, where + ": empty verb");
    lex.verbs[verb] = t;
  }
  return lex;
}

// The canonical dependency labels counted along the chain, in CSV column order.
inline constexpr std::array<std::string_view, 20> kChainLabels = {
    "SUJ",   "OBJ",       "ATS",   "ATO",     "MOD",     "A-OBJ", "DE-OBJ",
    "P-OBJ", "DET",       "DEP",   "PONCT",   "ROOT",    "DEPCOORD",
    "COORD", "AUXPASS",   "AUXCAUS", "AUXTPS", "AFF",    "ARG",   "MODREL"};

// One actor annotation described by 31 features: 3 about the sentence, 7 about
// the annotation neighborhood, the serialized head-to-root dependency chain,
// and 20 per-label counts over that chain.
struct ActorFeatures {
  bool active_voice = true;
  Transitivity transitivity = Transitivity::unknown;
  std::string modal_verb = "null";  // "+"-joined modal cues, or "null"
  int num_actors = 0;
  int actor_position = 0;  // 1-based among the statement's actors
  std::string container = "null";
  std::string preceding_annotation = "null";
  std::string following_annotation = "null";
  std::string preceding_pos = "null";
  int distance_to_main_verb = 0;
  std::vector<std::string> dependency_chain;
  std::array<int, 20> label_counts{};
  std::string label;  // training role, empty for unlabeled rows

  std::string chain_string() const {
    if (dependency_chain.empty()) return "null";
    std::string out;
    for (size_t i = 0; i < dependency_chain.size(); ++i) {
      if (i) out += '+';
      out += dependency_chain[i];
    }
    return out;
  }
};

inline constexpr std::string_view kFeatureColumns[] = {
    "active_voice",         "transitivity",
    "modal_verb",           "num_actors",
    "actor_position",       "container",
    "preceding_annotation", "following_annotation",
    "preceding_pos",        "distance_to_main_verb",
    "dependency_chain",     "SUJ",
    "OBJ",                  "ATS",
    "ATO",                  "MOD",
    "A-OBJ",                "DE-OBJ",
    "P-OBJ",                "DET",
    "DEP",                  "PONCT",
    "ROOT",                 "DEPCOORD",
    "COORD",                "AUXPASS",
    "AUXCAUS",              "AUXTPS",
    "AFF",                  "ARG",
    "MODREL"};
inline constexpr int kFeatureCount = 31;

inline std::string feature_csv_header(bool with_label) {
  std::string out;
  for (int i = 0; i < kFeatureCount; ++i) {
    if (i) out += ',';
    out += kFeatureColumns[i];
  }
  if (with_label) out += ",label";
  return out;
}

inline std::string feature_csv_row(const ActorFeatures& fv) {
  std::string out;
  out += fv.active_voice ? "true" : "false";
  out += ',';
  out += to_string(fv.transitivity);
  out += ',';
  out += fv.modal_verb;
  out += ',';
  out += std::to_string(fv.num_actors);
  out += ',';
  out += std::to_string(fv.actor_position);
  out += ',';
  out += fv.container;
  out += ',';
  out += fv.preceding_annotation;
  out += ',';
  out += fv.following_annotation;
  out += ',';
  out += fv.preceding_pos;
  out += ',';
  out += std::to_string(fv.distance_to_main_verb);
  out += ',';
  out += fv.chain_string();
  for (int c : fv.label_counts) {
    out += ',';
    out += std::to_string(c);
  }
  if (!fv.label.empty()) {
    out += ',';
    out += fv.label;
  }
  return out;
}

/// Features for the actor annotation at anns[actor_index]. The annotation
/// list is the statement's final, canonically ordered set; its geometry feeds
/// the neighborhood features.
inline ActorFeatures extract_actor_features(const Statement& s,
                                            const std::vector<Annotation>& anns,
                                            size_t actor_index, const Lexicon& lex,
                                            const VerbLexicon& verbs) {
  if (actor_index >= anns.size() || anns[actor_index].type != Concept::actor)
    fail(Errc::format, s.id + ": feature extraction expects an actor annotation");
  if (s.deps.root < 0 || s.deps.root >= static_cast<int>(s.tokens.size()))
    fail(Errc::no_main_verb, s.id + ": statement has no main verb");
  const Annotation& actor = anns[actor_index];
  const Span span = actor.bounds();

  ActorFeatures fv;
  fv.active_voice = !passive_voice(s);
  fv.transitivity = verbs.of(s.tokens[s.deps.root]);

  auto modal = modal_occurrences(lex, s.tokens);
  if (!modal.empty()) {
    fv.modal_verb.clear();
    for (size_t i = 0; i < modal.size(); ++i) {
      if (i) fv.modal_verb += '+';
      fv.modal_verb += modal[i].phrase;
    }
  }

  for (size_t i = 0; i < anns.size(); ++i) {
    if (anns[i].type != Concept::actor) continue;
    ++fv.num_actors;
    if (i == actor_index) fv.actor_position = fv.num_actors;
  }

  // Smallest annotation strictly containing the actor; nearest neighbors by
  // token order. Ties resolve by size, then span, then concept name.
  const Annotation* container = nullptr;
  const Annotation* preceding = nullptr;
  const Annotation* following = nullptr;
  for (size_t i = 0; i < anns.size(); ++i) {
    if (i == actor_index) continue;
    const Annotation& a = anns[i];
    Span b = a.bounds();
    if (segments_contain(a.segments, actor.segments) &&
        !segments_equal(a.segments, actor.segments)) {
      auto better = [&](const Annotation& x, const Annotation& y) {
        int sx = segments_size(x.segments), sy = segments_size(y.segments);
        if (sx != sy) return sx < sy;
        if (x.bounds().begin != y.bounds().begin) return x.bounds().begin < y.bounds().begin;
        return to_string(x.type) < to_string(y.type);
      };
      if (!container || better(a, *container)) container = &a;
    }
    if (b.end <= span.begin) {
      auto better = [&](const Annotation& x, const Annotation& y) {
        if (x.bounds().end != y.bounds().end) return x.bounds().end > y.bounds().end;
        if (x.bounds().begin != y.bounds().begin) return x.bounds().begin > y.bounds().begin;
        return to_string(x.type) < to_string(y.type);
      };
      if (!preceding || better(a, *preceding)) preceding = &a;
    }
    if (b.begin >= span.end) {
      auto better = [&](const Annotation& x, const Annotation& y) {
        if (x.bounds().begin != y.bounds().begin) return x.bounds().begin < y.bounds().begin;
        if (x.bounds().end != y.bounds().end) return x.bounds().end < y.bounds().end;
        return to_string(x.type) < to_string(y.type);
      };
      if (!following || better(a, *following)) following = &a;
    }
  }
  if (container) fv.container = to_string(container->type);
  if (preceding) fv.preceding_annotation = to_string(preceding->type);
  if (following) fv.following_annotation = to_string(following->type);

  if (span.begin > 0 && !s.tokens[span.begin - 1].pos.empty())
    fv.preceding_pos = s.tokens[span.begin - 1].pos;

  // Distance to the main verb, measured in annotations that lie wholly
  // between the actor span and the root token.
  int root = s.deps.root;
  Span gap{0, 0};
  if (root >= span.end)
    gap = {span.end, root};
  else if (root < span.begin)
    gap = {root + 1, span.begin};
  if (!gap.empty()) {
    for (size_t i = 0; i < anns.size(); ++i) {
      if (i == actor_index) continue;
      if (segments_contain({gap}, anns[i].segments)) ++fv.distance_to_main_verb;
    }
  }

  // Dependency labels from the actor's head token up to the root token,
  // excluding the root's own edge.
  int cur = head_token(s, span);
  while (cur != root && cur >= 0) {
    fv.dependency_chain.push_back(s.deps.edges[cur].label);
    cur = s.deps.edges[cur].head;
  }
  for (const std::string& l : fv.dependency_chain)
    for (size_t k = 0; k < kChainLabels.size(); ++k)
      if (l == kChainLabels[k]) ++fv.label_counts[k];

  return fv;
}

}  // namespace lexmeta
