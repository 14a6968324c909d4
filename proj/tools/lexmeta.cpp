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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lexmeta/lexmeta.hpp"

namespace {

using namespace lexmeta;

struct Options {
  std::string corpus;
  std::string lexicons;
  std::string rules;
  std::string model;
  std::string gold;
  std::string pred;
  std::string out;
  std::string features;
  std::string label_map;
  std::string exclude;
  std::string pattern;
  double t1 = Thresholds{}.t1;
  double t2 = Thresholds{}.t2;
  double t3 = Thresholds{}.t3;
  std::uint64_t seed = ForestParams{}.seed;
  int workers = 1;
  int trees = ForestParams{}.trees;
  int max_depth = ForestParams{}.max_depth;
  bool strict = true;
  bool h1_partial = false;
  bool kappa = false;
};

// Runs fn(0..n-1) on the requested number of threads. Work items are
// independent; failures are replayed in index order so the first diagnostic
// matches a sequential run.
void run_parallel(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int spawn = std::min<std::size_t>(workers, n);
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot write output file " + path);
  fn(out);
}

LoadOptions corpus_options(const Options& o) {
  LoadOptions lo;
  lo.strict = o.strict;
  if (!o.label_map.empty()) lo.labels = LabelMap::from_file(o.label_map);
  return lo;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

VerbLexicon verb_lexicon_from(const std::string& lexicons) {
  auto path = std::filesystem::path(lexicons) / "transitivity.tsv";
  if (!std::filesystem::exists(path)) return {};
  return load_verb_lexicon(path);
}

std::map<std::string, const Statement*> index_statements(const std::vector<Statement>& corpus) {
  std::map<std::string, const Statement*> by_id;
  for (const Statement& s : corpus) by_id[s.id] = &s;
  return by_id;
}

const Statement& statement_for(const std::map<std::string, const Statement*>& by_id,
                               const std::string& id) {
  auto it = by_id.find(id);
  if (it == by_id.end())
    fail(Errc::id_mismatch, "statement '" + id + "' has no corpus entry");
  return *it->second;
}

int cmd_annotate(const Options& o) {
  std::vector<std::string> warnings;
  std::vector<Statement> corpus = load_corpus(o.corpus, corpus_options(o), &warnings);
  Lexicon lex = load_lexicon(o.lexicons, o.strict, &warnings);
  print_warnings(warnings);
  RuleSet rules = load_rules(o.rules);
  EngineOptions eo;
  eo.h1_partial_overlap = o.h1_partial;

  std::vector<AnnotatedStatement> results(corpus.size());
  run_parallel(corpus.size(), o.workers,
               [&](std::size_t i) { results[i] = annotate_statement(corpus[i], lex, rules, eo); });
  std::sort(results.begin(), results.end(),
            [](const AnnotatedStatement& a, const AnnotatedStatement& b) { return a.id < b.id; });
  with_output(o.out, [&](std::ostream& out) { write_annotations(out, results); });
  return 0;
}

int cmd_query(const Options& o) {
  TreePattern pattern;
  try {
    pattern = compile_pattern(o.pattern);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    // Syntax diagnostics carry "offset N"; echo the pattern with a caret.
    std::string msg = e.what();
    if (auto at = msg.find("offset "); at != std::string::npos) {
      int column = std::atoi(msg.c_str() + at + 7);
      if (column >= 0 && column <= static_cast<int>(o.pattern.size())) {
        std::cerr << "  " << o.pattern << "\n  " << std::string(column, ' ') << "^\n";
      }
    }
    return 2;
  }

  std::vector<std::string> warnings;
  std::vector<Statement> corpus = load_corpus(o.corpus, corpus_options(o), &warnings);
  Lexicon lex;
  if (!o.lexicons.empty()) lex = load_lexicon(o.lexicons, o.strict, &warnings);
  print_warnings(warnings);

  with_output(o.out, [&](std::ostream& out) {
    for (const Statement& s : corpus) {
      detail::OccurrenceCache cache(lex, s.tokens);
      for (const Match& m : match_pattern(pattern, s.tree, cache.oracle(""))) {
        Span y = s.tree.yield_of(m.target);
        out << s.id << "\t" << s.tree.nodes[m.target].label << "\t[" << y.begin << "," << y.end
            << ")\t";
        for (int t = y.begin; t < y.end; ++t) {
          if (t > y.begin) out << ' ';
          out << s.tokens[t].surface;
        }
        out << "\n";
      }
    }
  });
  return 0;
}

// One CSV row per actor-role annotation. Role-typed annotations (agent,
// target, auxiliary_party) contribute labeled rows for training; plain actor
// annotations are labeled "actor", which the trainer rejects, so prediction
// output cannot silently masquerade as training data. Neighborhood features
// always see the untyped actor layer, matching what classification sees.
int cmd_features(const Options& o) {
  std::vector<std::string> warnings;
  std::vector<Statement> corpus = load_corpus(o.corpus, corpus_options(o), &warnings);
  Lexicon lex = load_lexicon(o.lexicons, o.strict, &warnings);
  print_warnings(warnings);
  VerbLexicon verbs = verb_lexicon_from(o.lexicons);
  auto by_id = index_statements(corpus);
  std::vector<AnnotatedStatement> annotated = read_annotations(o.pred);

  auto is_role = [](Concept c) {
    return c == Concept::agent || c == Concept::target || c == Concept::auxiliary_party;
  };

  with_output(o.out, [&](std::ostream& out) {
    out << feature_csv_header(true) << "\n";
    for (const AnnotatedStatement& as : annotated) {
      const Statement& s = statement_for(by_id, as.id);
      std::vector<Annotation> anns = as.annotations;
      for (Annotation& a : anns)
        if (is_role(a.type)) a.type = Concept::actor;
      for (std::size_t i = 0; i < anns.size(); ++i) {
        if (anns[i].type != Concept::actor) continue;
        ActorFeatures fv = extract_actor_features(s, anns, i, lex, verbs);
        fv.label = std::string(to_string(as.annotations[i].type));
        out << feature_csv_row(fv) << "\n";
      }
    }
  });
  return 0;
}

int cmd_train_actors(const Options& o) {
  FeatureDataset ds = load_feature_csv(o.features);
  ForestParams params;
  params.trees = o.trees;
  params.max_depth = o.max_depth;
  params.seed = o.seed;
  ActorModels models = train_actor_models(ds, params);
  save_actor_models(o.out, models);
  std::cerr << "trained 3 role forests (" << params.trees << " trees each) on " << ds.rows.size()
            << " rows, " << models.encoder.width() << " encoded features -> " << o.out << "\n";
  return 0;
}

int cmd_classify_actors(const Options& o) {
  std::vector<std::string> warnings;
  std::vector<Statement> corpus = load_corpus(o.corpus, corpus_options(o), &warnings);
  Lexicon lex = load_lexicon(o.lexicons, o.strict, &warnings);
  print_warnings(warnings);
  VerbLexicon verbs = verb_lexicon_from(o.lexicons);
  ActorModels models = load_actor_models(o.model);
  Thresholds th{o.t1, o.t2, o.t3};
  auto by_id = index_statements(corpus);
  std::vector<AnnotatedStatement> annotated = read_annotations(o.pred);

  std::vector<AnnotatedStatement> results(annotated.size());
  run_parallel(annotated.size(), o.workers, [&](std::size_t i) {
    const Statement& s = statement_for(by_id, annotated[i].id);
    results[i] = classify_actors(annotated[i], s, models, lex, verbs, th);
    sort_annotations(results[i].annotations);
  });
  std::sort(results.begin(), results.end(),
            [](const AnnotatedStatement& a, const AnnotatedStatement& b) { return a.id < b.id; });
  with_output(o.out, [&](std::ostream& out) { write_annotations(out, results); });
  return 0;
}

int cmd_eval(const Options& o) {
  std::vector<AnnotatedStatement> preds = read_annotations(o.pred);
  std::vector<AnnotatedStatement> golds = read_annotations(o.gold);

  EvalConfig cfg;
  if (!o.exclude.empty()) {
    cfg.excluded.clear();
    if (o.exclude != "none") {
      std::stringstream ss(o.exclude);
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        auto c = concept_from_string(name);
        if (!c) fail(Errc::format, "unknown concept '" + name + "' in --exclude");
        cfg.excluded.insert(*c);
      }
    }
  }

  EvalReport report = evaluate(preds, golds, cfg);
  std::cout << render_report(report);

  nlohmann::ordered_json j = report_to_json(report);
  if (o.kappa) {
    KappaResult k = cohen_kappa(preds, golds);
    std::cout << "agreement: observed " << std::fixed << std::setprecision(6) << k.observed
              << ", expected " << k.expected << ", kappa " << k.kappa << "\n";
    j["agreement"]["observed"] = k.observed;
    j["agreement"]["expected"] = k.expected;
    j["agreement"]["kappa"] = k.kappa;
  }
  if (!o.out.empty()) {
    std::ofstream out(o.out);
    if (!out) fail(Errc::io, "cannot write output file " + o.out);
    out << j.dump(1) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{
      "lexmeta: annotates legal statements with semantic metadata, trains and applies\n"
      "actor role classifiers, and scores annotation quality."};
  app.require_subcommand(1);
  app.set_config("--config", "", "read option defaults from an INI file (flags win)");
  app.failure_message(CLI::FailureMessage::help);

  auto add_corpus = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--corpus", o.corpus, "corpus JSON Lines file");
    if (required) opt->required();
    cmd->add_option("--label-map", o.label_map,
                    "dependency label mapping file (default: built-in canonical map)");
    cmd->add_flag("--strict,!--lenient", o.strict,
                  "abort on malformed input instead of skipping it (default: strict)");
  };
  auto add_lexicons = [&](CLI::App* cmd) {
    cmd->add_option("--lexicons", o.lexicons, "lexicon directory")->required();
  };
  auto add_out = [&](CLI::App* cmd, const char* what) {
    cmd->add_option("--out", o.out, what);
  };
  auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("--workers", o.workers, "parallel statement workers (default 1)")
        ->check(CLI::Range(1, 256));
  };

  CLI::App* annotate = app.add_subcommand(
      "annotate", "run the rule pipeline over a corpus and emit annotated statements");
  add_corpus(annotate);
  add_lexicons(annotate);
  annotate->add_option("--rules", o.rules, "rule file")->required();
  add_out(annotate, "output JSON Lines file (default: standard output)");
  add_workers(annotate);
  annotate->add_flag("--h1-partial", o.h1_partial,
                     "also drop the smaller of two partially overlapping same-type annotations");

  CLI::App* query = app.add_subcommand("query", "match one tree pattern against a corpus");
  query->add_option("pattern", o.pattern, "tree pattern, e.g. \"PP << marker:condition\"")
      ->required();
  add_corpus(query);
  query->add_option("--lexicons", o.lexicons, "lexicon directory (needed for marker: tests)");
  add_out(query, "output file (default: standard output)");

  CLI::App* features = app.add_subcommand(
      "features", "extract per-actor feature rows as CSV from annotated statements");
  add_corpus(features);
  add_lexicons(features);
  features->add_option("--pred", o.pred, "annotated statements JSON Lines file")->required();
  add_out(features, "output CSV file (default: standard output)");

  CLI::App* train = app.add_subcommand("train-actors", "train the three actor role forests");
  train->add_option("--features", o.features, "labeled feature CSV file")->required();
  train->add_option("--out", o.out, "model file to write")->required();
  train->add_option("--trees", o.trees, "trees per forest (default 100)")
      ->check(CLI::PositiveNumber);
  train->add_option("--max-depth", o.max_depth, "tree depth limit, 0 = unlimited")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--seed", o.seed, "random seed (fixed default for reproducible models)");

  CLI::App* classify = app.add_subcommand(
      "classify-actors", "refine actor annotations into agent/target/auxiliary_party roles");
  add_corpus(classify);
  add_lexicons(classify);
  classify->add_option("--pred", o.pred, "annotated statements JSON Lines file")->required();
  classify->add_option("--model", o.model, "trained model file")->required();
  classify->add_option("--t1", o.t1, "agent acceptance threshold (default 0.9)");
  classify->add_option("--t2", o.t2, "agent runner-up margin (default 0.1)");
  classify->add_option("--t3", o.t3, "undecided margin (default 0.1)");
  add_out(classify, "output JSON Lines file (default: standard output)");
  add_workers(classify);

  CLI::App* eval = app.add_subcommand(
      "eval", "score predicted annotations against gold annotations");
  eval->add_option("--pred", o.pred, "predicted annotations JSON Lines file")->required();
  eval->add_option("--gold", o.gold, "gold annotations JSON Lines file")->required();
  eval->add_option("--exclude", o.exclude,
                   "comma-separated concepts to skip, or 'none' "
                   "(default: constraint,result,reference)");
  eval->add_flag("--kappa", o.kappa, "also report chance-corrected span agreement");
  add_out(eval, "also write the report as JSON to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (annotate->parsed()) return cmd_annotate(o);
    if (query->parsed()) return cmd_query(o);
    if (features->parsed()) return cmd_features(o);
    if (train->parsed()) return cmd_train_actors(o);
    if (classify->parsed()) return cmd_classify_actors(o);
    if (eval->parsed()) return cmd_eval(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
