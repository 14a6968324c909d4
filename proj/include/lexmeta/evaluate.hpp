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
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexmeta/core.hpp"
#include "lexmeta/error.hpp"

namespace lexmeta {

struct EvalRow {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;

  long long extracted() const { return tp + fp; }
  long long relevant() const { return tp + fn; }
};

struct EvalConfig {
  std::set<Concept> excluded = {Concept::constraint, Concept::result, Concept::reference};
};

struct EvalReport {
  std::map<Concept, EvalRow> phrase;
  EvalRow phrase_total;
  std::map<Concept, EvalRow> statement;
  EvalRow statement_total;
  std::vector<Concept> excluded;
};

/// Percentage of num/den in tenths of a percent, rounded half up.
/// percent_tenths(1069, 1100) == 972, printed as "97.2".
inline long long percent_tenths(long long num, long long den) {
  return (2000 * num + den) / (2 * den);
}

inline std::string format_percent(long long num, long long den) {
  if (den == 0) return "N/A";
  long long tenths = percent_tenths(num, den);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

/// A prediction matches when some gold annotation of the same concept shares
/// at least one token with it.
inline bool matches_gold(const Annotation& pred, const std::vector<Annotation>& gold) {
  for (const Annotation& g : gold)
    if (g.type == pred.type && segments_intersect(g.segments, pred.segments)) return true;
  return false;
}

/// Count match/misclassified/missed annotations and statement-type hits over
/// id-aligned prediction and gold sets. Every prediction is judged
/// independently against the gold set; every gold annotation without a
/// same-type overlapping prediction counts once as missed.
inline EvalReport evaluate(const std::vector<AnnotatedStatement>& preds,
                           const std::vector<AnnotatedStatement>& golds,
                           const EvalConfig& cfg = {}) {
  std::map<std::string, const AnnotatedStatement*> gold_by_id;
  for (const auto& g : golds) gold_by_id[g.id] = &g;
  if (gold_by_id.size() != golds.size())
    fail(Errc::id_mismatch, "gold statement ids are not unique");
  std::set<std::string> pred_ids;
  for (const auto& p : preds) {
    if (!pred_ids.insert(p.id).second)
      fail(Errc::id_mismatch, "duplicate predicted statement id '" + p.id + "'");
    if (!gold_by_id.count(p.id))
      fail(Errc::id_mismatch, "statement '" + p.id + "' has no gold counterpart");
  }
  for (const auto& g : golds)
    if (!pred_ids.count(g.id))
      fail(Errc::id_mismatch, "statement '" + g.id + "' has no prediction");

  EvalReport report;
  report.excluded.assign(cfg.excluded.begin(), cfg.excluded.end());
  auto counted = [&](Concept c) { return !cfg.excluded.count(c); };

  for (const auto& p : preds) {
    const AnnotatedStatement& g = *gold_by_id.at(p.id);
    for (const Annotation& a : p.annotations) {
      if (!counted(a.type)) continue;
      EvalRow& row = report.phrase[a.type];
      if (matches_gold(a, g.annotations))
        ++row.tp;
      else
        ++row.fp;
    }
    for (const Annotation& a : g.annotations) {
      if (!counted(a.type)) continue;
      if (!matches_gold(a, p.annotations)) ++report.phrase[a.type].fn;
    }
    if (p.statement_type == g.statement_type) {
      ++report.statement[p.statement_type].tp;
    } else {
      ++report.statement[p.statement_type].fp;
      ++report.statement[g.statement_type].fn;
    }
  }

  for (const auto& [c, row] : report.phrase) {
    report.phrase_total.tp += row.tp;
    report.phrase_total.fp += row.fp;
    report.phrase_total.fn += row.fn;
  }
  for (const auto& [c, row] : report.statement) {
    report.statement_total.tp += row.tp;
    report.statement_total.fp += row.fp;
    report.statement_total.fn += row.fn;
  }
  return report;
}

namespace detail {

inline void render_section(std::ostream& out, const std::string& title,
                           const std::map<Concept, EvalRow>& rows, const EvalRow& total) {
  out << title << "\n";
  out << "  " << std::left << std::setw(16) << "concept" << std::right << std::setw(10)
      << "extracted" << std::setw(8) << "match" << std::setw(8) << "miscl" << std::setw(8)
      << "missed" << std::setw(20) << "precision / recall" << "\n";
  auto line = [&](const std::string& name, const EvalRow& r) {
    out << "  " << std::left << std::setw(16) << name << std::right << std::setw(10)
        << r.extracted() << std::setw(8) << r.tp << std::setw(8) << r.fp << std::setw(8) << r.fn
        << std::setw(20)
        << format_percent(r.tp, r.extracted()) + " / " + format_percent(r.tp, r.relevant())
        << "\n";
  };
  for (const auto& [c, r] : rows) line(std::string(to_string(c)), r);
  line("TOTAL", total);
}

}  // namespace detail

inline std::string render_report(const EvalReport& report) {
  std::ostringstream out;
  if (!report.excluded.empty()) {
    out << "excluded concepts:";
    for (Concept c : report.excluded) out << " " << to_string(c);
    out << "\n";
  }
  detail::render_section(out, "phrase level", report.phrase, report.phrase_total);
  detail::render_section(out, "statement level", report.statement, report.statement_total);
  return out.str();
}

inline nlohmann::ordered_json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  auto excluded = nlohmann::ordered_json::array();
  for (Concept c : report.excluded) excluded.push_back(std::string(to_string(c)));
  j["excluded"] = std::move(excluded);
  auto section = [](const std::map<Concept, EvalRow>& rows, const EvalRow& total) {
    nlohmann::ordered_json s;
    auto encode = [](const EvalRow& r) {
      nlohmann::ordered_json e;
      e["extracted"] = r.extracted();
      e["match"] = r.tp;
      e["misclassified"] = r.fp;
      e["missed"] = r.fn;
      e["precision"] = r.extracted() ? format_percent(r.tp, r.extracted()) : "N/A";
      e["recall"] = r.relevant() ? format_percent(r.tp, r.relevant()) : "N/A";
      return e;
    };
    for (const auto& [c, r] : rows) s[std::string(to_string(c))] = encode(r);
    s["TOTAL"] = encode(total);
    return s;
  };
  j["phrase"] = section(report.phrase, report.phrase_total);
  j["statement"] = section(report.statement, report.statement_total);
  return j;
}

}  // namespace lexmeta
