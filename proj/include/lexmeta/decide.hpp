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
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/error.hpp"
#include "lexmeta/features.hpp"
#include "lexmeta/forest.hpp"

namespace lexmeta {

enum class RoleDecision { agent, target, auxiliary_party, cannot_classify };

struct Thresholds {
  double t1 = 0.9;
  double t2 = 0.1;
  double t3 = 0.1;
};

/// Pick the actor's role from the three classifier scores. The agent reading
/// wins when its score clears t1, is the best outright, or is the runner-up
/// within t2 of the best; otherwise a best-to-second gap under t3 refuses to
/// decide, and the remaining choice falls to target versus auxiliary party.
inline RoleDecision decide_role(const RoleScores& sc, const Thresholds& th = {}) {
  double s1 = std::max({sc.agent, sc.target, sc.auxiliary});
  double s2 = std::min({std::max(sc.agent, sc.target), std::max(sc.agent, sc.auxiliary),
                        std::max(sc.target, sc.auxiliary)});
  if (sc.agent > th.t1 || sc.agent == s1 || (sc.agent == s2 && s1 - s2 < th.t2))
    return RoleDecision::agent;
  if (s1 - s2 < th.t3) return RoleDecision::cannot_classify;
  if (sc.target == s1) return RoleDecision::target;
  return RoleDecision::auxiliary_party;
}

inline Concept role_concept(RoleDecision d) {
  switch (d) {
    case RoleDecision::agent: return Concept::agent;
    case RoleDecision::target: return Concept::target;
    case RoleDecision::auxiliary_party: return Concept::auxiliary_party;
    case RoleDecision::cannot_classify: return Concept::actor;
  }
  return Concept::actor;
}

/// Refine every actor annotation in the statement to its decided role.
/// Features are extracted against the untouched annotation list first, so
/// one actor's refinement never shifts another's neighborhood features.
inline AnnotatedStatement classify_actors(const AnnotatedStatement& as, const Statement& s,
                                          const ActorModels& models, const Lexicon& lex,
                                          const VerbLexicon& verbs, const Thresholds& th = {}) {
  AnnotatedStatement out = as;
  std::vector<std::pair<size_t, RoleDecision>> decisions;
  for (size_t i = 0; i < as.annotations.size(); ++i) {
    if (as.annotations[i].type != Concept::actor) continue;
    auto fv = extract_actor_features(s, as.annotations, i, lex, verbs);
    auto scores = score_roles(models, models.encoder.encode(fv));
    decisions.push_back({i, decide_role(scores, th)});
  }
  for (auto [i, d] : decisions) {
    out.annotations[i].type = role_concept(d);
    out.annotations[i].cannot_classify = d == RoleDecision::cannot_classify;
  }
  return out;
}

}  // namespace lexmeta
