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

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <sstream>

#include "lexmeta/annotation_io.hpp"
#include "lexmeta/corpus.hpp"
#include "lexmeta/engine.hpp"
#include "support.hpp"

using namespace lexmeta;
using testsupport::make_statement;
using testsupport::StmtSpec;

namespace {

Lexicon small_lexicon(const std::map<Concept, std::vector<std::string>>& entries) {
  Lexicon lex;
  for (const auto& [c, phrases] : entries)
    for (const auto& p : phrases) {
      Marker m;
      bool lemma = p.rfind("lemma:", 0) == 0;
      std::istringstream words(lemma ? p.substr(6) : p);
      std::string w;
      while (words >> w) m.words.push_back(fold_case(w));
      m.lemma = lemma;
      lex.add(c, m);
    }
  return lex;
}

std::string render(const AnnotatedStatement& st) {
  std::string out = std::string(to_string(st.statement_type));
  for (const Annotation& a : st.annotations) {
    out += " ";
    out += to_string(a.type);
    for (Span s : a.segments)
      out += "[" + std::to_string(s.begin) + "," + std::to_string(s.end) + ")";
  }
  return out;
}

}  // namespace

TEST_CASE("subtract_spans produces the leftover segments") {
  CHECK(subtract_spans({0, 10}, {}) == std::vector<Span>{{0, 10}});
  CHECK(subtract_spans({0, 10}, {{3, 5}}) == std::vector<Span>{{0, 3}, {5, 10}});
  CHECK(subtract_spans({0, 10}, {{0, 4}}) == std::vector<Span>{{4, 10}});
  CHECK(subtract_spans({0, 10}, {{6, 10}}) == std::vector<Span>{{0, 6}});
  CHECK(subtract_spans({0, 10}, {{0, 10}}).empty());
  CHECK(subtract_spans({2, 8}, {{0, 3}, {7, 12}}) == std::vector<Span>{{3, 7}});
  CHECK(subtract_spans({0, 10}, {{2, 5}, {4, 7}}) == std::vector<Span>{{0, 2}, {7, 10}});
  CHECK(subtract_spans({4, 6}, {{0, 2}, {8, 9}}) == std::vector<Span>{{4, 6}});
}

TEST_CASE("modal cue selection prefers longer cues across classes") {
  auto lex = load_lexicon(testsupport::data_dir() / "lexicons");

  SECTION("shall not resolves to prohibition") {
    auto s = make_statement({.tree = "(SENT (VN (V shall) (ADV not)) (V drive))"});
    auto occs = modal_occurrences(lex, s.tokens);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].span == Span{0, 2});
    CHECK(occs[0].cls == Concept::prohibition);
    CHECK(occs[0].phrase == "shall not");
  }
  SECTION("plain shall is obligation") {
    auto s = make_statement({.tree = "(SENT (VN (V shall)) (V drive))"});
    auto occs = modal_occurrences(lex, s.tokens);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].cls == Concept::obligation);
  }
  SECTION("may belongs to both permission and prohibition contexts") {
    auto s = make_statement({.tree = "(SENT (V One) (V may) (ADV not) (V drive))"});
    auto occs = modal_occurrences(lex, s.tokens);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].span == Span{1, 3});
    CHECK(occs[0].cls == Concept::prohibition);
  }
  SECTION("disjoint cues are all reported in span order") {
    auto s = make_statement({.tree = "(SENT (V may) (V x) (V shall) (V y) (V must))"});
    auto occs = modal_occurrences(lex, s.tokens);
    REQUIRE(occs.size() == 3);
    CHECK(occs[0].span == Span{0, 1});
    CHECK(occs[0].cls == Concept::permission);
    CHECK(occs[1].span == Span{2, 3});
    CHECK(occs[1].cls == Concept::obligation);
    CHECK(occs[2].span == Span{4, 5});
    CHECK(occs[2].cls == Concept::obligation);
  }
}

TEST_CASE("dependency guards gate tagged rules") {
  // Active: "The mayor sues the judge", passive: "The mayor is sued by the judge".
  auto active = make_statement({
      .tree = "(SENT (NP (D The) (N mayor)) (VP (V sues) (NP (D the) (N judge))))",
      .deps = {{2, "DET"}, {3, "SUJ"}, {0, "ROOT"}, {5, "DET"}, {3, "OBJ"}},
  });
  auto passive = make_statement({
      .tree = "(SENT (NP (D The) (N mayor)) (VP (VN (V is) (V sued)) "
              "(PP (P by) (NP (D the) (N judge)))))",
      .deps = {{2, "DET"}, {4, "SUJ"}, {4, "AUXPASS"}, {0, "ROOT"},
               {4, "MOD"}, {7, "DET"}, {5, "P-OBJ"}},
  });
  CHECK(!passive_voice(active));
  CHECK(passive_voice(passive));

  SECTION("direct guard checks") {
    using detail::guard_passes;
    CHECK(guard_passes(active, RuleTag::subj, {0, 2}));
    CHECK(!guard_passes(active, RuleTag::subj, {3, 5}));
    CHECK(guard_passes(active, RuleTag::obj_active, {3, 5}));
    CHECK(!guard_passes(active, RuleTag::obj_passive, {3, 5}));
    CHECK(!guard_passes(active, RuleTag::obj_active, {0, 2}));
    CHECK(guard_passes(passive, RuleTag::subj, {0, 2}));
    CHECK(guard_passes(passive, RuleTag::obj_passive, {5, 7}));
    CHECK(!guard_passes(passive, RuleTag::obj_active, {5, 7}));
    CHECK(guard_passes(active, RuleTag::none, {3, 5}));
    CHECK(guard_passes(active, RuleTag::pre_action, {3, 5}));
  }

  SECTION("guarded rules pick the right phrases end to end") {
    auto lex = small_lexicon({{Concept::actor, {"mayor", "judge"}}});
    auto rules = parse_rules(
        "phrase actor subj :: NP=t < (N << marker:actor)\n"
        "phrase actor obj-active :: NP=t < (N << marker:actor)\n"
        "phrase actor obj-passive :: NP=t < (N << marker:actor)\n");
    auto got = annotate_statement(active, lex, rules);
    REQUIRE(got.annotations.size() == 2);
    CHECK(got.annotations[0].segments == std::vector<Span>{{0, 2}});
    CHECK(got.annotations[0].rule == "actor-1");
    CHECK(got.annotations[1].segments == std::vector<Span>{{3, 5}});
    CHECK(got.annotations[1].rule == "actor-2");

    auto gotp = annotate_statement(passive, lex, rules);
    REQUIRE(gotp.annotations.size() == 2);
    CHECK(gotp.annotations[0].segments == std::vector<Span>{{0, 2}});
    CHECK(gotp.annotations[0].rule == "actor-1");
    CHECK(gotp.annotations[1].segments == std::vector<Span>{{5, 7}});
    CHECK(gotp.annotations[1].rule == "actor-3");
  }
}

TEST_CASE("the action annotation is the verb phrase minus carved spans") {
  auto lex = small_lexicon(
      {{Concept::condition, {"if"}}, {Concept::modality, {"may", "shall"}}});

  SECTION("an inner carve splits the action into two segments") {
    auto s = make_statement(
        {.tree = "(SENT (VP (X a) (X b) (X c) (PP (P if) (X d)) (X e)))"});
    auto rules = parse_rules(
        "phrase condition pre-action :: PP=t << marker:condition\n"
        "phrase action :: VP=t\n");
    auto got = annotate_statement(s, lex, rules);
    REQUIRE(got.annotations.size() == 2);
    CHECK(got.annotations[0].type == Concept::action);
    CHECK(got.annotations[0].segments == std::vector<Span>{{0, 3}, {5, 6}});
    CHECK(got.annotations[0].bounds() == Span{0, 6});
    CHECK(got.annotations[1].type == Concept::condition);
    CHECK(got.annotations[1].segments == std::vector<Span>{{3, 5}});
  }

  SECTION("a fully carved verb phrase produces no action") {
    auto s = make_statement({.tree = "(SENT (VP (VN (V may))))"});
    auto rules = parse_rules(
        "phrase modality pre-action :: VN=t << marker:modality\n"
        "phrase action :: VP=t\n");
    auto got = annotate_statement(s, lex, rules);
    REQUIRE(got.annotations.size() == 1);
    CHECK(got.annotations[0].type == Concept::modality);
  }

  SECTION("adjacent carves merge into one gap") {
    auto s = make_statement(
        {.tree = "(SENT (VP (VN (V shall)) (PP (P if) (X x)) (X go)))"});
    auto rules = parse_rules(
        "phrase modality pre-action :: VN=t << marker:modality\n"
        "phrase condition pre-action :: PP=t << marker:condition\n"
        "phrase action :: VP=t\n");
    auto got = annotate_statement(s, lex, rules);
    REQUIRE(got.annotations.size() == 3);
    CHECK(got.annotations[0].type == Concept::modality);
    CHECK(got.annotations[0].segments == std::vector<Span>{{0, 1}});
    CHECK(got.annotations[1].type == Concept::condition);
    CHECK(got.annotations[1].segments == std::vector<Span>{{1, 3}});
    CHECK(got.annotations[2].type == Concept::action);
    CHECK(got.annotations[2].segments == std::vector<Span>{{3, 4}});
  }
}

TEST_CASE("same-type overlap cleanup") {
  auto ann = [](Concept c, std::vector<Span> segs, std::string rule) {
    return Annotation{c, std::move(segs), std::move(rule)};
  };

  SECTION("nested mentions collapse onto the widest span") {
    // "the director of the grand-ducal police" with an inner actor mention.
    auto s = make_statement(
        {.tree = "(SENT (NP (D the) (N director) (PP (P of) "
                 "(NP (D the) (A grand-ducal) (N police)))))"});
    auto lex = small_lexicon({{Concept::actor, {"director", "police"}}});
    auto rules = parse_rules("phrase actor :: NP=t < (N << marker:actor)\n");
    auto got = annotate_statement(s, lex, rules);
    REQUIRE(got.annotations.size() == 1);
    CHECK(got.annotations[0].type == Concept::actor);
    CHECK(got.annotations[0].segments == std::vector<Span>{{0, 6}});
  }

  SECTION("equal spans keep the earliest annotation") {
    std::vector<Annotation> anns = {ann(Concept::actor, {{2, 5}}, "actor-1"),
                                    ann(Concept::actor, {{2, 5}}, "actor-2"),
                                    ann(Concept::actor, {{2, 5}}, "actor-3")};
    detail::heuristic_same_type(anns, {});
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].rule == "actor-1");
  }

  SECTION("different types never interact") {
    std::vector<Annotation> anns = {ann(Concept::actor, {{2, 5}}, "a"),
                                    ann(Concept::location, {{2, 5}}, "b"),
                                    ann(Concept::location, {{3, 4}}, "c")};
    detail::heuristic_same_type(anns, {});
    REQUIRE(anns.size() == 2);
    CHECK(anns[0].rule == "a");
    CHECK(anns[1].rule == "b");
  }

  SECTION("partial overlaps survive by default") {
    std::vector<Annotation> anns = {ann(Concept::time, {{0, 4}}, "a"),
                                    ann(Concept::time, {{2, 6}}, "b")};
    detail::heuristic_same_type(anns, {});
    CHECK(anns.size() == 2);
  }

  SECTION("partial-overlap mode drops the smaller, later, higher-index span") {
    EngineOptions opts;
    opts.h1_partial_overlap = true;
    std::vector<Annotation> smaller = {ann(Concept::time, {{0, 5}}, "a"),
                                       ann(Concept::time, {{3, 7}}, "b")};
    detail::heuristic_same_type(smaller, opts);
    REQUIRE(smaller.size() == 1);
    CHECK(smaller[0].rule == "a");

    std::vector<Annotation> later = {ann(Concept::time, {{2, 6}}, "a"),
                                     ann(Concept::time, {{0, 4}}, "b")};
    detail::heuristic_same_type(later, opts);
    REQUIRE(later.size() == 1);
    CHECK(later[0].rule == "b");

    std::vector<Annotation> index = {ann(Concept::action, {{0, 2}, {4, 6}}, "a"),
                                     ann(Concept::action, {{0, 2}, {4, 6}, {8, 9}}, "b")};
    detail::heuristic_same_type(index, opts);
    REQUIRE(index.size() == 1);
    CHECK(index[0].rule == "b");
  }
}

TEST_CASE("details inside cited references are dropped") {
  auto s = make_statement({
      .tree = "(SENT (P under) (NP (D the) (N Directive) (PP (P of) "
              "(NP (D the) (N Commission)))))",
      .references = {{1, 6}},
  });
  auto lex = small_lexicon({{Concept::actor, {"commission"}}});
  auto rules = parse_rules("phrase actor :: NP=t < (N << marker:actor)\n");

  SECTION("a strictly inner actor vanishes") {
    auto got = annotate_statement(s, lex, rules);
    REQUIRE(got.annotations.size() == 1);
    CHECK(got.annotations[0].type == Concept::reference);
    CHECK(got.annotations[0].segments == std::vector<Span>{{1, 6}});
    CHECK(got.annotations[0].rule == "input");
  }

  SECTION("an actor coextensive with the reference stays") {
    auto s2 = make_statement({
        .tree = "(SENT (P under) (NP (D the) (N Directive) (PP (P of) "
                "(NP (D the) (N Commission)))))",
        .references = {{4, 6}},
    });
    auto got = annotate_statement(s2, lex, rules);
    REQUIRE(got.annotations.size() == 2);
    CHECK(got.annotations[0].type == Concept::actor);
    CHECK(got.annotations[1].type == Concept::reference);
    CHECK(got.annotations[0].segments == got.annotations[1].segments);
  }

  SECTION("only detail concepts are droppable") {
    std::vector<Annotation> anns = {
        Annotation{Concept::reference, {{0, 10}}, "input"},
        Annotation{Concept::actor, {{2, 4}}, "actor-1"},
        Annotation{Concept::time, {{4, 6}}, "time-1"},
        Annotation{Concept::sanction, {{6, 8}}, "sanction-1"},
        Annotation{Concept::action, {{1, 3}}, "action-1"},
    };
    detail::heuristic_inside_reference(anns);
    REQUIRE(anns.size() == 3);
    CHECK(anns[0].type == Concept::reference);
    CHECK(anns[1].type == Concept::sanction);
    CHECK(anns[2].type == Concept::action);
  }
}

TEST_CASE("generic concepts lose to coextensive specializations") {
  auto pair_survivor = [](Concept a, Concept b) {
    std::vector<Annotation> anns = {Annotation{a, {{0, 2}}, "x"},
                                    Annotation{b, {{0, 2}}, "y"}};
    detail::heuristic_generalization(anns);
    std::vector<Concept> out;
    for (const auto& an : anns) out.push_back(an.type);
    return out;
  };

  CHECK(pair_survivor(Concept::situation, Concept::sanction) ==
        std::vector<Concept>{Concept::sanction});
  CHECK(pair_survivor(Concept::result, Concept::sanction) ==
        std::vector<Concept>{Concept::sanction});
  CHECK(pair_survivor(Concept::situation, Concept::result) ==
        std::vector<Concept>{Concept::result});
  CHECK(pair_survivor(Concept::constraint, Concept::condition) ==
        std::vector<Concept>{Concept::condition});
  CHECK(pair_survivor(Concept::constraint, Concept::violation) ==
        std::vector<Concept>{Concept::violation});
  CHECK(pair_survivor(Concept::condition, Concept::violation) ==
        std::vector<Concept>{Concept::violation});
  CHECK(pair_survivor(Concept::actor, Concept::agent) ==
        std::vector<Concept>{Concept::agent});
  CHECK(pair_survivor(Concept::actor, Concept::target) ==
        std::vector<Concept>{Concept::target});

  SECTION("unrelated same-span types both stay") {
    auto both = pair_survivor(Concept::actor, Concept::location);
    CHECK(both == std::vector<Concept>{Concept::actor, Concept::location});
    auto cond_exc = pair_survivor(Concept::condition, Concept::exception);
    CHECK(cond_exc.size() == 2);
  }

  SECTION("different spans never interact") {
    std::vector<Annotation> anns = {Annotation{Concept::situation, {{0, 3}}, "x"},
                                    Annotation{Concept::sanction, {{0, 2}}, "y"}};
    detail::heuristic_generalization(anns);
    CHECK(anns.size() == 2);
  }

  SECTION("a chain on one span leaves only the most specific") {
    std::vector<Annotation> anns = {Annotation{Concept::situation, {{0, 2}}, "a"},
                                    Annotation{Concept::result, {{0, 2}}, "b"},
                                    Annotation{Concept::sanction, {{0, 2}}, "c"}};
    detail::heuristic_generalization(anns);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].type == Concept::sanction);
  }

  SECTION("one phrase can be two unrelated things at once") {
    // "court of justice" reads as an actor and as a location.
    auto s = make_statement({.tree = "(SENT (NP (D the) (N court) (P of) (N justice)))"});
    auto lex = small_lexicon({{Concept::actor, {"court of justice"}},
                              {Concept::location, {"court of justice"}}});
    auto rules = parse_rules(
        "phrase actor :: NP=t << marker:actor\n"
        "phrase location :: NP=t << marker:location\n");
    auto got = annotate_statement(s, lex, rules);
    REQUIRE(got.annotations.size() == 2);
    CHECK(got.annotations[0].type == Concept::actor);
    CHECK(got.annotations[1].type == Concept::location);
    CHECK(got.annotations[0].segments == got.annotations[1].segments);
  }
}

TEST_CASE("statement classification walks rules by priority") {
  auto lex = load_lexicon(testsupport::data_dir() / "lexicons");
  auto rules = load_rules(testsupport::data_dir() / "rules" / "default.rules");
  auto classify = [&](const std::string& tree, std::vector<Annotation> anns) {
    auto s = make_statement({.tree = tree});
    return classify_statement(s, anns, lex, rules);
  };

  SECTION("sanction or violation annotations force penalty") {
    CHECK(classify("(SENT (V One) (V may) (V go))",
                   {Annotation{Concept::sanction, {{0, 1}}, "x"},
                    Annotation{Concept::modality, {{1, 2}}, "y"}}) == Concept::penalty);
    CHECK(classify("(SENT (V One) (V shall) (V go))",
                   {Annotation{Concept::violation, {{0, 1}}, "x"},
                    Annotation{Concept::modality, {{1, 2}}, "y"}}) == Concept::penalty);
  }
  SECTION("penalty cues in the text force penalty") {
    CHECK(classify("(SENT (V offenders) (V are) (V punishable))", {}) == Concept::penalty);
  }
  SECTION("modal classes resolve through the modality annotation") {
    CHECK(classify("(SENT (V One) (V may) (V go))",
                   {Annotation{Concept::modality, {{1, 2}}, "m"}}) == Concept::permission);
    CHECK(classify("(SENT (V One) (V shall) (V go))",
                   {Annotation{Concept::modality, {{1, 2}}, "m"}}) == Concept::obligation);
    CHECK(classify("(SENT (V One) (V shall) (V not) (V go))",
                   {Annotation{Concept::modality, {{1, 3}}, "m"}}) == Concept::prohibition);
  }
  SECTION("a modal cue without a modality annotation does not classify") {
    CHECK(classify("(SENT (V One) (V may) (V go))", {}) == Concept::obligation);
  }
  SECTION("the cue must sit inside one modality segment") {
    CHECK(classify("(SENT (V One) (V may) (V go))",
                   {Annotation{Concept::modality, {{0, 1}}, "m"}}) == Concept::obligation);
  }
  SECTION("definition and fact cues") {
    CHECK(classify("(SENT (V Municipality) (V means) (V area))", {}) == Concept::definition);
    CHECK(classify("(SENT (V It) (V is) (V situated) (V there))", {}) == Concept::fact);
  }
  SECTION("nothing matches: obligation by default") {
    CHECK(classify("(SENT (V trees) (V grow))", {}) == Concept::obligation);
  }
}

TEST_CASE("the micro corpus annotates exactly to its gold file") {
  auto lex = load_lexicon(testsupport::data_dir() / "lexicons");
  auto rules = load_rules(testsupport::data_dir() / "rules" / "default.rules");
  auto corpus = load_corpus(testsupport::data_dir() / "fixtures" / "micro" / "corpus.jsonl");
  auto gold = read_annotations(testsupport::data_dir() / "fixtures" / "micro" / "gold.jsonl");
  REQUIRE(corpus.size() == gold.size());

  for (size_t i = 0; i < corpus.size(); ++i) {
    auto got = annotate_statement(corpus[i], lex, rules);
    INFO("statement " << corpus[i].id);
    CHECK(got.id == gold[i].id);
    CHECK(render(got) == render(gold[i]));
  }
}

TEST_CASE("micro corpus annotations carry their producing rule") {
  auto lex = load_lexicon(testsupport::data_dir() / "lexicons");
  auto rules = load_rules(testsupport::data_dir() / "rules" / "default.rules");
  auto corpus = load_corpus(testsupport::data_dir() / "fixtures" / "micro" / "corpus.jsonl");

  std::map<std::string, std::map<std::string, std::string>> by_key;
  for (const auto& s : corpus) {
    auto got = annotate_statement(s, lex, rules);
    for (const auto& a : got.annotations) {
      Span b = a.bounds();
      by_key[s.id][std::string(to_string(a.type)) + "[" + std::to_string(b.begin) + "," +
                   std::to_string(b.end) + ")"] = a.rule;
    }
  }
  CHECK(by_key["s1"]["condition[0,3)"] == "condition-1");
  CHECK(by_key["s1"]["condition[17,25)"] == "condition-2");
  CHECK(by_key["s1"]["actor[4,7)"] == "actor-1");
  CHECK(by_key["s1"]["artifact[1,3)"] == "artifact-2");
  CHECK(by_key["s1"]["action[8,16)"] == "action-1");
  CHECK(by_key["s2"]["condition[1,8)"] == "condition-5");
  CHECK(by_key["s2"]["sanction[12,17)"] == "sanction-1");
  CHECK(by_key["s2"]["time[14,17)"] == "time-2");
  CHECK(by_key["s3"]["actor[0,3)"] == "actor-1");
  CHECK(by_key["s3"]["actor[13,15)"] == "actor-3");
  CHECK(by_key["s3"]["actor[16,18)"] == "actor-3");
  CHECK(by_key["s3"]["artifact[10,12)"] == "artifact-1");
  CHECK(by_key["s3"]["condition[18,24)"] == "condition-5");
  CHECK(by_key["s3"]["violation[22,24)"] == "violation-1");
}

TEST_CASE("annotation order is canonical and the pipeline is deterministic") {
  auto lex = load_lexicon(testsupport::data_dir() / "lexicons");
  auto rules = load_rules(testsupport::data_dir() / "rules" / "default.rules");
  auto corpus = load_corpus(testsupport::data_dir() / "fixtures" / "micro" / "corpus.jsonl");

  for (const auto& s : corpus) {
    auto a = annotate_statement(s, lex, rules);
    auto b = annotate_statement(s, lex, rules);
    CHECK(annotated_to_json(a).dump() == annotated_to_json(b).dump());
    for (size_t i = 1; i < a.annotations.size(); ++i) {
      Span prev = a.annotations[i - 1].bounds();
      Span cur = a.annotations[i].bounds();
      bool ordered =
          prev.begin < cur.begin ||
          (prev.begin == cur.begin &&
           to_string(a.annotations[i - 1].type) <= to_string(a.annotations[i].type));
      CHECK(ordered);
    }
  }
}

TEST_CASE("annotated statements round-trip through JSON lines") {
  auto lex = load_lexicon(testsupport::data_dir() / "lexicons");
  auto rules = load_rules(testsupport::data_dir() / "rules" / "default.rules");
  auto corpus = load_corpus(testsupport::data_dir() / "fixtures" / "micro" / "corpus.jsonl");

  std::vector<AnnotatedStatement> all;
  for (const auto& s : corpus) all.push_back(annotate_statement(s, lex, rules));
  std::ostringstream out;
  write_annotations(out, all);
  std::istringstream in(out.str());
  auto back = read_annotations(in);
  REQUIRE(back.size() == all.size());
  for (size_t i = 0; i < all.size(); ++i) {
    CHECK(back[i].id == all[i].id);
    CHECK(back[i].statement_type == all[i].statement_type);
    REQUIRE(back[i].annotations.size() == all[i].annotations.size());
    for (size_t k = 0; k < all[i].annotations.size(); ++k) {
      CHECK(back[i].annotations[k].type == all[i].annotations[k].type);
      CHECK(back[i].annotations[k].segments == all[i].annotations[k].segments);
      CHECK(back[i].annotations[k].rule == all[i].annotations[k].rule);
    }
  }

  SECTION("reader rejects malformed rows") {
    auto bad = [](const std::string& text, Errc code) {
      std::istringstream in(text);
      return testsupport::throws_code([&] { read_annotations(in); }, code);
    };
    CHECK(bad("not json\n", Errc::format));
    CHECK(bad(R"({"id":"a"})" "\n", Errc::format));
    CHECK(bad(R"({"id":"a","statement_type":"actor","annotations":[]})" "\n", Errc::format));
    CHECK(bad(R"({"id":"a","statement_type":"fact","annotations":[{"type":"actor"}]})" "\n",
              Errc::format));
    CHECK(bad(R"({"id":"a","statement_type":"fact","annotations":[{"type":"actor","segments":[[3,2]]}]})" "\n",
              Errc::format));
    std::string row = R"({"id":"a","statement_type":"fact","annotations":[]})";
    CHECK(bad(row + "\n" + row + "\n", Errc::format));
  }
}

TEST_CASE("heuristic invariants hold on random annotation sets") {
  std::mt19937_64 rng(20260816);
  const Concept types[] = {Concept::actor,     Concept::agent,     Concept::artifact,
                           Concept::situation, Concept::sanction,  Concept::result,
                           Concept::condition, Concept::constraint, Concept::reference,
                           Concept::time,      Concept::action};

  auto gen = [&]() {
    std::vector<Annotation> anns;
    int n = static_cast<int>(rng() % 9);
    for (int i = 0; i < n; ++i) {
      Concept t = types[rng() % (sizeof(types) / sizeof(types[0]))];
      int begin = static_cast<int>(rng() % 12);
      int len = 1 + static_cast<int>(rng() % 4);
      std::vector<Span> segs = {{begin, begin + len}};
      if (t == Concept::action && rng() % 3 == 0) {
        int b2 = begin + len + 1 + static_cast<int>(rng() % 3);
        segs.push_back({b2, b2 + 1 + static_cast<int>(rng() % 3)});
      }
      anns.push_back({t, segs, "r" + std::to_string(i)});
    }
    return anns;
  };

  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  };

  for (int iter = 0; iter < 10000; ++iter) {
    auto input = gen();
    std::string tag = "iter " + std::to_string(iter);

    auto h1 = input;
    detail::heuristic_same_type(h1, {});
    for (size_t i = 0; i < h1.size(); ++i)
      for (size_t j = 0; j < h1.size(); ++j) {
        if (i == j || h1[i].type != h1[j].type) continue;
        expect(!segments_equal(h1[i].segments, h1[j].segments), tag + ": equal survivors");
        if (i != j)
          expect(!segments_contain(h1[i].segments, h1[j].segments) ||
                     segments_equal(h1[i].segments, h1[j].segments),
                 tag + ": contained survivor");
      }
    // Every dropped annotation has a surviving same-type witness that covers it.
    for (const auto& x : input) {
      bool survived = false;
      for (const auto& y : h1) survived |= y.rule == x.rule;
      if (survived) continue;
      bool witnessed = false;
      for (const auto& y : h1)
        witnessed |= y.type == x.type && segments_contain(y.segments, x.segments);
      expect(witnessed, tag + ": dropped without witness");
    }
    // Survivors keep their input order.
    {
      size_t pos = 0;
      bool ordered = true;
      for (const auto& y : h1) {
        while (pos < input.size() && input[pos].rule != y.rule) ++pos;
        if (pos == input.size()) ordered = false;
      }
      expect(ordered, tag + ": survivor order changed");
    }

    auto h1p = input;
    EngineOptions popts;
    popts.h1_partial_overlap = true;
    detail::heuristic_same_type(h1p, popts);
    for (size_t i = 0; i < h1p.size(); ++i)
      for (size_t j = i + 1; j < h1p.size(); ++j)
        if (h1p[i].type == h1p[j].type)
          expect(!segments_intersect(h1p[i].segments, h1p[j].segments),
                 tag + ": intersecting survivors in partial mode");

    auto h2 = input;
    detail::heuristic_inside_reference(h2);
    auto droppable = [](Concept c) {
      return c == Concept::actor || c == Concept::time || c == Concept::location ||
             c == Concept::artifact || c == Concept::condition;
    };
    std::vector<std::string> h2_expected;
    for (const auto& a : input) {
      bool inside = false;
      if (droppable(a.type))
        for (const auto& r : input)
          if (r.type == Concept::reference && segments_contain(r.segments, a.segments) &&
              !segments_equal(r.segments, a.segments))
            inside = true;
      if (!inside) h2_expected.push_back(a.rule);
    }
    std::vector<std::string> h2_got;
    for (const auto& a : h2) h2_got.push_back(a.rule);
    expect(h2_got == h2_expected, tag + ": reference cleanup mismatch");

    auto h3 = input;
    detail::heuristic_generalization(h3);
    std::vector<std::string> h3_expected;
    for (const auto& a : input) {
      bool generic = false;
      for (const auto& b : input)
        if (&a != &b && segments_equal(a.segments, b.segments) && generalizes(a.type, b.type))
          generic = true;
      if (!generic) h3_expected.push_back(a.rule);
    }
    std::vector<std::string> h3_got;
    for (const auto& a : h3) h3_got.push_back(a.rule);
    expect(h3_got == h3_expected, tag + ": generalization cleanup mismatch");

    auto again = input;
    detail::heuristic_same_type(again, {});
    expect(again.size() == h1.size(), tag + ": nondeterministic cleanup");
  }

  CAPTURE(failures);
  REQUIRE(failures.empty());
}
