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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexmeta/error.hpp"
#include "lexmeta/features.hpp"

namespace lexmeta {

// A feature table as read from CSV: raw string cells under the fixed column
// schema, plus one role label per row.
struct FeatureDataset {
  std::vector<std::array<std::string, kFeatureCount>> rows;
  std::vector<std::string> labels;
};

inline FeatureDataset load_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open feature file " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(Errc::format, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != feature_csv_header(true))
    fail(Errc::schema_mismatch, path.string() + ": unexpected CSV header");
  FeatureDataset ds;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    cells.push_back(cur);
    if (static_cast<int>(cells.size()) != kFeatureCount + 1)
      fail(Errc::format, path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(kFeatureCount + 1) + " cells, got " +
                             std::to_string(cells.size()));
    std::array<std::string, kFeatureCount> row;
    for (int i = 0; i < kFeatureCount; ++i) row[i] = cells[i];
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(cells[kFeatureCount]);
  }
  return ds;
}

// Encodes the mixed categorical/numeric schema into a dense numeric vector:
// numeric columns pass through, categorical columns expand to one indicator
// per value seen at build time. Unseen categories encode to all zeros.
class FeatureEncoder {
 public:
  // Column indices of the categorical features in kFeatureColumns order.
  static const std::vector<int>& categorical_columns() {
    static const std::vector<int> cols = {1, 2, 5, 6, 7, 8, 10};
    return cols;
  }

  static FeatureEncoder build(const FeatureDataset& ds) {
    FeatureEncoder enc;
    std::map<int, std::set<std::string>> seen;
    for (const auto& row : ds.rows)
      for (int c : categorical_columns()) seen[c].insert(row[c]);
    for (int c : categorical_columns())
      enc.values_[c] = std::vector<std::string>(seen[c].begin(), seen[c].end());
    return enc;
  }

  std::vector<double> encode(const std::array<std::string, kFeatureCount>& row) const {
    std::vector<double> out;
    for (int i = 0; i < kFeatureCount; ++i) {
      auto it = values_.find(i);
      if (it == values_.end()) {
        out.push_back(numeric_cell(row[i], i));
      } else {
        for (const std::string& v : it->second) out.push_back(row[i] == v ? 1.0 : 0.0);
      }
    }
    return out;
  }

  std::vector<double> encode(const ActorFeatures& fv) const {
    std::array<std::string, kFeatureCount> row;
    row[0] = fv.active_voice ? "true" : "false";
    row[1] = to_string(fv.transitivity);
    row[2] = fv.modal_verb;
    row[3] = std::to_string(fv.num_actors);
    row[4] = std::to_string(fv.actor_position);
    row[5] = fv.container;
    row[6] = fv.preceding_annotation;
    row[7] = fv.following_annotation;
    row[8] = fv.preceding_pos;
    row[9] = std::to_string(fv.distance_to_main_verb);
    row[10] = fv.chain_string();
    for (int i = 0; i < 20; ++i) row[11 + i] = std::to_string(fv.label_counts[i]);
    return encode(row);
  }

  int width() const {
    int w = 0;
    for (int i = 0; i < kFeatureCount; ++i) {
      auto it = values_.find(i);
      w += it == values_.end() ? 1 : static_cast<int>(it->second.size());
    }
    return w;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    for (const auto& [col, vals] : values_) j[std::string(kFeatureColumns[col])] = vals;
    return j;
  }

  static FeatureEncoder from_json(const nlohmann::json& j) {
    FeatureEncoder enc;
    for (int c : categorical_columns()) {
      std::string name(kFeatureColumns[c]);
      if (!j.contains(name) || !j[name].is_array())
        fail(Errc::schema_mismatch, "model encoder misses column '" + name + "'");
      enc.values_[c] = j[name].get<std::vector<std::string>>();
    }
    return enc;
  }

 private:
  static double numeric_cell(const std::string& cell, int col) {
    if (col == 0) return cell == "true" ? 1.0 : 0.0;
    try {
      size_t used = 0;
      double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      return v;
    } catch (const std::exception&) {
      fail(Errc::format, "non-numeric cell '" + cell + "' in column " +
                             std::string(kFeatureColumns[col]));
    }
  }

  std::map<int, std::vector<std::string>> values_;
};

struct ForestParams {
  int trees = 100;
  int max_depth = 0;  // 0 = unlimited
  std::uint64_t seed = 20260816;
};

// Binary decision tree over the encoded vectors, stored as a flat node list.
// Inner nodes route x[feature] <= threshold to the left child.
struct DecisionTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int vote = -1;  // leaf vote 0/1; -1 on inner nodes
  };
  std::vector<Node> nodes;

  int predict(const std::vector<double>& x) const {
    int n = 0;
    while (nodes[n].vote < 0) n = x[nodes[n].feature] <= nodes[n].threshold
                                       ? nodes[n].left
                                       : nodes[n].right;
    return nodes[n].vote;
  }
};

struct Forest {
  std::vector<DecisionTree> trees;

  // Score = fraction of trees voting positive.
  double score(const std::vector<double>& x) const {
    if (trees.empty()) return 0.0;
    int pos = 0;
    for (const DecisionTree& t : trees) pos += t.predict(x);
    return static_cast<double>(pos) / static_cast<double>(trees.size());
  }
};

namespace detail {

inline double gini(int pos, int n) {
  if (n == 0) return 0.0;
  double p = static_cast<double>(pos) / n;
  return 2.0 * p * (1.0 - p);
}

struct TreeBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  int max_depth;
  int features_per_split;
  std::mt19937_64& rng;
  DecisionTree tree;

  int leaf(const std::vector<int>& idx) {
    int pos = 0;
    for (int i : idx) pos += y[i];
    DecisionTree::Node n;
    n.vote = pos * 2 >= static_cast<int>(idx.size()) ? 1 : 0;
    tree.nodes.push_back(n);
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  int build(const std::vector<int>& idx, int depth) {
    int pos = 0;
    for (int i : idx) pos += y[i];
    if (pos == 0 || pos == static_cast<int>(idx.size()) ||
        (max_depth > 0 && depth >= max_depth))
      return leaf(idx);

    const int width = static_cast<int>(x[idx[0]].size());
    std::set<int> candidates;
    for (int k = 0; k < features_per_split; ++k)
      candidates.insert(static_cast<int>(rng() % static_cast<std::uint64_t>(width)));

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = gini(pos, static_cast<int>(idx.size()));
    for (int f : candidates) {
      std::vector<std::pair<double, int>> vals;
      vals.reserve(idx.size());
      for (int i : idx) vals.push_back({x[i][f], y[i]});
      std::sort(vals.begin(), vals.end());
      int left_n = 0, left_pos = 0;
      const int n = static_cast<int>(vals.size());
      for (int i = 0; i + 1 < n; ++i) {
        ++left_n;
        left_pos += vals[i].second;
        if (vals[i].first == vals[i + 1].first) continue;
        double split =
            gini(left_pos, left_n) * left_n / n + gini(pos - left_pos, n - left_n) * (n - left_n) / n;
        if (split < best_score - 1e-12) {
          best_score = split;
          best_feature = f;
          best_threshold = (vals[i].first + vals[i + 1].first) / 2.0;
        }
      }
    }
    if (best_feature < 0) return leaf(idx);

    std::vector<int> left, right;
    for (int i : idx)
      (x[i][best_feature] <= best_threshold ? left : right).push_back(i);
    if (left.empty() || right.empty()) return leaf(idx);

    DecisionTree::Node n;
    n.feature = best_feature;
    n.threshold = best_threshold;
    tree.nodes.push_back(n);
    int self = static_cast<int>(tree.nodes.size()) - 1;
    tree.nodes[self].left = build(left, depth + 1);
    tree.nodes[self].right = build(right, depth + 1);
    return self;
  }
};

}  // namespace detail

/// Train a bagged forest of Gini-split trees. Each tree draws a bootstrap
/// sample and considers sqrt(width) random feature candidates per split;
/// tree t seeds its generator with params.seed + t, so results are exactly
/// reproducible.
inline Forest train_forest(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                           const ForestParams& params = {}) {
  if (x.empty() || x.size() != y.size())
    fail(Errc::format, "training needs one label per feature vector");
  bool has_pos = false, has_neg = false;
  for (int v : y) (v ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    fail(Errc::degenerate_dataset, "training data contains a single class");
  if (params.trees < 1) fail(Errc::format, "tree count must be positive");

  const int n = static_cast<int>(x.size());
  const int width = static_cast<int>(x[0].size());
  if (width == 0) fail(Errc::format, "feature vectors are empty");
  for (const auto& row : x)
    if (static_cast<int>(row.size()) != width)
      fail(Errc::schema_mismatch, "feature vectors have inconsistent widths");
  int per_split = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(width))));

  Forest forest;
  for (int t = 0; t < params.trees; ++t) {
    std::mt19937_64 rng(params.seed + static_cast<std::uint64_t>(t));
    std::vector<int> sample;
    sample.reserve(n);
    for (int i = 0; i < n; ++i)
      sample.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(n)));
    detail::TreeBuilder builder{x, y, params.max_depth, per_split, rng, {}};
    builder.build(sample, 0);
    forest.trees.push_back(std::move(builder.tree));
  }
  return forest;
}

// The three per-role forests plus everything needed to reproduce their
// feature encoding.
struct ActorModels {
  FeatureEncoder encoder;
  ForestParams params;
  Forest agent;
  Forest target;
  Forest auxiliary;
};

struct RoleScores {
  double agent = 0.0;
  double target = 0.0;
  double auxiliary = 0.0;
};

inline RoleScores score_roles(const ActorModels& m, const std::vector<double>& x) {
  const int expected = m.encoder.width();
  if (static_cast<int>(x.size()) != expected)
    fail(Errc::schema_mismatch, "feature vector width " + std::to_string(x.size()) +
                                    " does not match the model's " + std::to_string(expected));
  return {m.agent.score(x), m.target.score(x), m.auxiliary.score(x)};
}

inline const char* kRoleLabels[] = {"agent", "target", "auxiliary_party"};

/// Train all three role models from one labeled dataset. Rows labeled with
/// the role are positives, everything else negatives.
inline ActorModels train_actor_models(const FeatureDataset& ds, const ForestParams& params = {}) {
  for (const std::string& l : ds.labels)
    if (l != "agent" && l != "target" && l != "auxiliary_party")
      fail(Errc::format, "unknown role label '" + l + "'");
  ActorModels m;
  m.encoder = FeatureEncoder::build(ds);
  m.params = params;
  std::vector<std::vector<double>> x;
  for (const auto& row : ds.rows) x.push_back(m.encoder.encode(row));
  for (const char* role : kRoleLabels) {
    std::vector<int> y;
    for (const std::string& l : ds.labels) y.push_back(l == role ? 1 : 0);
    Forest f = train_forest(x, y, params);
    if (std::string(role) == "agent")
      m.agent = std::move(f);
    else if (std::string(role) == "target")
      m.target = std::move(f);
    else
      m.auxiliary = std::move(f);
  }
  return m;
}

namespace detail {

inline nlohmann::ordered_json forest_to_json(const Forest& f) {
  auto trees = nlohmann::ordered_json::array();
  for (const DecisionTree& t : f.trees) {
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : t.nodes)
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.vote});
    trees.push_back(std::move(nodes));
  }
  return trees;
}

inline Forest forest_from_json(const nlohmann::json& j) {
  Forest f;
  if (!j.is_array()) fail(Errc::format, "model forest must be an array");
  for (const auto& jt : j) {
    DecisionTree t;
    for (const auto& jn : jt) {
      if (!jn.is_array() || jn.size() != 5) fail(Errc::format, "bad tree node");
      DecisionTree::Node n;
      n.feature = jn[0].get<int>();
      n.threshold = jn[1].get<double>();
      n.left = jn[2].get<int>();
      n.right = jn[3].get<int>();
      n.vote = jn[4].get<int>();
      t.nodes.push_back(n);
    }
    if (t.nodes.empty()) fail(Errc::format, "empty tree in model");
    f.trees.push_back(std::move(t));
  }
  return f;
}

}  // namespace detail

inline constexpr int kModelSchemaVersion = 1;

inline void save_actor_models(const std::filesystem::path& path, const ActorModels& m) {
  nlohmann::ordered_json j;
  j["schema"] = kModelSchemaVersion;
  j["seed"] = m.params.seed;
  j["trees"] = m.params.trees;
  j["max_depth"] = m.params.max_depth;
  j["encoder"] = m.encoder.to_json();
  j["models"]["agent"] = detail::forest_to_json(m.agent);
  j["models"]["target"] = detail::forest_to_json(m.target);
  j["models"]["auxiliary_party"] = detail::forest_to_json(m.auxiliary);
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot write model " + path.string());
  out << j.dump(1) << "\n";
}

inline ActorModels load_actor_models(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open model " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(Errc::format, path.string() + ": invalid JSON");
  if (!j.contains("schema") || !j["schema"].is_number_integer() ||
      j["schema"].get<int>() != kModelSchemaVersion)
    fail(Errc::schema_mismatch, path.string() + ": unsupported model schema");
  ActorModels m;
  m.params.seed = j.value("seed", std::uint64_t{0});
  m.params.trees = j.value("trees", 0);
  m.params.max_depth = j.value("max_depth", 0);
  if (!j.contains("encoder") || !j.contains("models"))
    fail(Errc::schema_mismatch, path.string() + ": model misses encoder or forests");
  m.encoder = FeatureEncoder::from_json(j["encoder"]);
  const auto& models = j["models"];
  for (const char* role : kRoleLabels)
    if (!models.contains(role))
      fail(Errc::schema_mismatch, path.string() + ": model misses role '" + role + "'");
  m.agent = detail::forest_from_json(models["agent"]);
  m.target = detail::forest_from_json(models["target"]);
  m.auxiliary = detail::forest_from_json(models["auxiliary_party"]);
  return m;
}

}  // namespace lexmeta
