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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/error.hpp"

namespace lexmeta {

struct KappaResult {
  double observed = 0.0;
  double expected = 0.0;
  double kappa = 0.0;
};

namespace detail {

inline std::string span_key(const std::string& id, const std::vector<Span>& segs) {
  std::string key = id;
  for (Span s : segs)
    key += ":" + std::to_string(s.begin) + "-" + std::to_string(s.end);
  return key;
}

// Label one annotator gives an item: the concept on that exact span, the
// sorted '+'-joined concepts when several share it, or "none".
inline std::map<std::string, std::string> label_items(
    const std::vector<AnnotatedStatement>& side) {
  std::map<std::string, std::set<std::string>> concepts;
  for (const AnnotatedStatement& st : side)
    for (const Annotation& a : st.annotations)
      concepts[span_key(st.id, a.segments)].insert(std::string(to_string(a.type)));
  std::map<std::string, std::string> labels;
  for (const auto& [key, names] : concepts) {
    std::string label;
    for (const std::string& n : names) {
      if (!label.empty()) label += '+';
      label += n;
    }
    labels[key] = label;
  }
  return labels;
}

}  // namespace detail

/// Cohen's kappa over the two annotators' spans: the item set is the union of
/// every (statement, exact span) pair either side annotated, an absent side
/// labels the item "none", and expected agreement comes from each side's
/// marginal label distribution.
inline KappaResult cohen_kappa(const std::vector<AnnotatedStatement>& a,
                               const std::vector<AnnotatedStatement>& b) {
  auto la = detail::label_items(a);
  auto lb = detail::label_items(b);
  std::set<std::string> items;
  for (const auto& [k, v] : la) items.insert(k);
  for (const auto& [k, v] : lb) items.insert(k);
  if (items.empty()) fail(Errc::empty_union, "no annotated spans on either side");

  const double n = static_cast<double>(items.size());
  std::map<std::string, int> count_a, count_b;
  int agree = 0;
  for (const std::string& item : items) {
    auto ita = la.find(item);
    auto itb = lb.find(item);
    const std::string& va = ita == la.end() ? "none" : ita->second;
    const std::string& vb = itb == lb.end() ? "none" : itb->second;
    ++count_a[va];
    ++count_b[vb];
    if (va == vb) ++agree;
  }

  KappaResult r;
  r.observed = agree / n;
  for (const auto& [label, ca] : count_a) {
    auto itb = count_b.find(label);
    if (itb != count_b.end()) r.expected += (ca / n) * (itb->second / n);
  }
  if (r.expected >= 1.0) {
    // Both marginals concentrate on one shared label, which forces full
    // observed agreement.
    r.kappa = 1.0;
    return r;
  }
  r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
  return r;
}

}  // namespace lexmeta
