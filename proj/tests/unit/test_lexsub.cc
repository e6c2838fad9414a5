#include <doctest.h>

#include <random>

#include "acadaid/error.h"
#include "acadaid/lexsub.h"
#include "acadaid/resource.h"
#include "support.h"

using namespace acadaid;

namespace {

Resource reporting_verbs() { return read_resource(testing::toy("reporting_verbs_resource.tsv")); }

LexSubInstance instance(std::string target, std::vector<Substitute> subs,
                        std::string lemma = "") {
  LexSubInstance x;
  x.id = "s";
  x.sentence = {"we", target, "it"};
  x.target_index = 1;
  x.target = target;
  x.lemma = std::move(lemma);
  x.substitutes = std::move(subs);
  return x;
}

Resource resource_of(const std::vector<std::string> &academic) {
  Resource r;
  for (const auto &w : academic) {
    ResourceEntry e;
    e.phrase = PhraseKey({std::string_view(w)});
    e.acad_rate = 2;
    e.nonacad_rate = 1;
    e.ratio = 2;
    e.sources = {Source::kTfidf};
    r.insert(e);
  }
  return r;
}

}  // namespace

TEST_CASE("the 'said' example loads with seven substitutes on the verb") {
  auto ex = load_lexsub(testing::toy("said_example.jsonl"));
  REQUIRE(ex.size() == 5);
  CHECK(ex[4].target == "said");
  CHECK(ex[4].headword() == "say");
  CHECK(ex[4].substitutes.size() == 7);
  CHECK(ex[0].headword() == "pacific");  // no lemma field: the target stands in
}

TEST_CASE("lexsub parse errors") {
  const std::string ok = R"({"id":"a","tokens":["x","y"],"target_index":1,"pos":"VERB","substitutes":[]})";
  CHECK(parse_lexsub(ok + "\n", "t").size() == 1);
  const std::string out_of_range = R"({"id":"a","tokens":["x","y"],"target_index":2,"pos":"VERB","substitutes":[]})";
  try {
    parse_lexsub(ok + "\n" + out_of_range + "\n", "t");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_lexsub(R"({"id":"a","target_index":0})", "t"), ParseError);
}

TEST_CASE("academic membership against the reporting-verb resource") {
  Resource r = reporting_verbs();
  AcademicLexicon lex(&r);
  for (const char *w : {"report", "state", "claim"}) CHECK(lex.is_academic(std::string_view(w)));
  for (const char *w : {"say", "declare", "mention", "allege"}) CHECK_FALSE(lex.is_academic(std::string_view(w)));
  CHECK(lex.is_academic(std::string_view("Report")));
  AcademicLexicon empty;
  CHECK_FALSE(empty.is_academic(std::string_view("report")));

  AcademicLexicon with_list(&r);
  with_list.add_external_list({PhraseKey({"paradigm"})});
  CHECK(with_list.is_academic(std::string_view("paradigm")));
}

TEST_CASE("golden IWI labels for the 'said' example") {
  Resource r = reporting_verbs();
  AcademicLexicon lex(&r);
  auto iwi = derive_iwi(load_lexsub(testing::toy("said_example.jsonl")), lex);
  REQUIRE(iwi.size() == 5);
  const std::vector<std::pair<std::string, IwiLabel>> expected = {
      {"pacific", IwiLabel::kFormal},   {"first", IwiLabel::kFormal},
      {"financial", IwiLabel::kFormal}, {"corp", IwiLabel::kFormal},
      {"said", IwiLabel::kInformal}};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(iwi[i].token() == expected[i].first);
    CHECK(iwi[i].label == expected[i].second);
  }
}

TEST_CASE("IWI labeling rules") {
  Resource r = reporting_verbs();
  AcademicLexicon lex(&r);
  auto academic_target = instance("report", {{"claim", 2}});
  auto no_academic_sub = instance("say", {{"mention", 2}, {"declare", 1}});
  auto informal = instance("say", {{"mention", 2}, {"state", 1}});
  auto labels = derive_iwi({academic_target, no_academic_sub, informal}, lex);
  CHECK(labels[0].label == IwiLabel::kFormal);
  CHECK(labels[1].label == IwiLabel::kFormal);
  CHECK(labels[2].label == IwiLabel::kInformal);
}

TEST_CASE("iwi_stats hand tally") {
  CHECK(iwi_stats({}) == IwiStats{});
  Resource r = reporting_verbs();
  AcademicLexicon lex(&r);
  auto a = instance("say", {{"state", 1}});
  auto b = instance("say", {{"claim", 1}});
  auto c = instance("dog", {{"hound", 1}});
  auto stats = iwi_stats(derive_iwi({a, b, c}, lex));
  CHECK(stats.informal_tokens == 2);
  CHECK(stats.informal_types == 1);
  CHECK(stats.formal_tokens == 1);
  CHECK(stats.formal_types == 1);
}

TEST_CASE("growing the resource moves labels monotonically") {
  const std::vector<std::string> pool = {"alpha", "beta", "gamma", "delta", "eps", "zeta"};
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LexSubInstance> data;
    for (int i = 0; i < 6; ++i) {
      std::vector<Substitute> subs;
      for (int k = 0; k < 3; ++k) subs.push_back({pool[rng() % pool.size()], 1});
      data.push_back(instance(pool[rng() % pool.size()], subs));
    }
    std::vector<std::string> small, large;
    for (const auto &w : pool) {
      int pick = rng() % 3;
      if (pick == 0) small.push_back(w);
      if (pick <= 1) large.push_back(w);
    }
    Resource rs = resource_of(small), rl = resource_of(large);
    auto before = derive_iwi(data, AcademicLexicon(&rs));
    auto after = derive_iwi(data, AcademicLexicon(&rl));
    AcademicLexicon big(&rl);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (before[i].label == IwiLabel::kInformal && after[i].label == IwiLabel::kFormal) {
        CHECK(big.is_academic(std::string_view(data[i].target)));
      }
    }
  }
}

TEST_CASE("word pairs for the 'said' example") {
  Resource r = reporting_verbs();
  AcademicLexicon lex(&r);
  FrequencyTable acad, non;
  // The target must be more frequent than each academic substitute.
  acad.add(PhraseKey({"said"}), 50);
  non.add(PhraseKey({"said"}), 60);
  acad.add(PhraseKey({"report"}), 30);
  acad.add(PhraseKey({"state"}), 20);
  acad.add(PhraseKey({"claim"}), 10);
  auto pairs = derive_pairs(load_lexsub(testing::toy("said_example.jsonl")), lex, acad, non);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto &[p, n] : pairs) got.insert({p.informal, p.academic});
  CHECK(got == std::set<std::pair<std::string, std::string>>{
                   {"say", "claim"}, {"say", "report"}, {"say", "state"}});

  // Rule 3: a substitute at least as frequent as the target is not paired.
  acad.add(PhraseKey({"report"}), 100);
  auto fewer = derive_pairs(load_lexsub(testing::toy("said_example.jsonl")), lex, acad, non);
  CHECK(fewer.count(WordPair{"say", "report"}) == 0);

  CHECK(derive_pairs({instance("report", {{"claim", 1}})}, lex, acad, non).empty());
}

TEST_CASE("group selection by weight") {
  Resource r = reporting_verbs();
  AcademicLexicon lex(&r);
  auto x = instance("say", {{"report", 3}, {"state", 2}, {"claim", 1}, {"mention", 2}, {"declare", 1}});
  auto built = build_groups({x}, lex, {});
  REQUIRE(built.groups.size() == 1);
  const auto &c = built.groups[0].candidates;
  CHECK(c[0] == GroupCandidate{"report", true, 3});
  CHECK(c[1] == GroupCandidate{"state", true, 2});
  CHECK(c[2] == GroupCandidate{"mention", false, 2});
  CHECK(c[3] == GroupCandidate{"declare", false, 1});
}

TEST_CASE("group backfill and drop") {
  Resource r = resource_of({"report", "detect"});
  AcademicLexicon lex(&r);
  SynonymLexicon syn;
  syn.add("say", "detect", 0.5);
  syn.add("say", "tell", 0.5);

  auto x = instance("say", {{"report", 2}, {"mention", 1}});
  auto built = build_groups({x}, lex, {&syn});
  REQUIRE(built.groups.size() == 1);
  const auto &c = built.groups[0].candidates;
  CHECK(c[0] == GroupCandidate{"report", true, 2});
  CHECK(c[1] == GroupCandidate{"detect", true, 0});
  CHECK(c[2] == GroupCandidate{"mention", false, 1});
  CHECK(c[3] == GroupCandidate{"tell", false, 0});

  auto dropped = build_groups({instance("say", {{"report", 1}})}, lex, {});
  CHECK(dropped.groups.empty());
  CHECK(dropped.dropped == 1);
  // A formal target never produces a group and is not counted as dropped.
  auto formal = build_groups({instance("say", {{"tell", 1}})}, lex, {&syn});
  CHECK(formal.groups.empty());
  CHECK(formal.dropped == 0);
}

TEST_CASE("groups round trip through JSON") {
  Resource r = reporting_verbs();
  AcademicLexicon lex(&r);
  auto x = instance("say", {{"report", 3}, {"state", 2}, {"claim", 1}, {"mention", 2}, {"declare", 1}});
  auto built = build_groups({x}, lex, {});
  auto j = group_to_json(built.groups[0]);
  auto back = group_from_json(j, "t", 1);
  CHECK(back.candidates == built.groups[0].candidates);
  CHECK(back.instance.target == "say");
}

TEST_CASE("every group has four candidates with gold weights or zero") {
  Resource r = resource_of({"a1", "a2", "a3"});
  AcademicLexicon lex(&r);
  SynonymLexicon syn;
  for (const char *w : {"a1", "a2", "a3", "n1", "n2", "n3"}) syn.add("t", w, 1.0);
  std::mt19937_64 rng(59);
  const std::vector<std::string> pool = {"a1", "a2", "a3", "n1", "n2", "n3", "n4"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Substitute> subs;
    std::set<std::string> seen;
    for (int k = 0; k < 4; ++k) {
      auto w = pool[rng() % pool.size()];
      if (seen.insert(w).second) subs.push_back({w, 1 + static_cast<int>(rng() % 4)});
    }
    auto x = instance("t", subs);
    auto built = build_groups({x}, lex, {&syn});
    for (const auto &g : built.groups) {
      int academic = 0;
      for (const auto &c : g.candidates) {
        academic += c.academic;
        int gold = 0;
        for (const auto &s : subs) {
          if (s.word == c.word) gold = s.weight;
        }
        CHECK(c.relevance == gold);
      }
      CHECK(academic == 2);
    }
  }
}

TEST_CASE("convert_corpus on the 'said' example") {
  Resource r = reporting_verbs();
  AcademicLexicon lex(&r);
  auto converted = convert_corpus(load_lexsub(testing::toy("said_example.jsonl")), lex);
  REQUIRE(converted.size() == 1);
  CHECK(converted[0].target == "said");
  std::set<std::string> subs;
  for (const auto &s : converted[0].substitutes) subs.insert(s.word);
  CHECK(subs == std::set<std::string>{"report", "state", "claim"});
}

TEST_CASE("convert_corpus output has no academic targets or informal substitutes") {
  auto data = load_lexsub(testing::toy("lexsub_train.jsonl"));
  Resource r = resource_of({"report", "state", "claim", "obtain", "acquire", "purchase",
                            "demonstrate", "utilize", "assist"});
  AcademicLexicon lex(&r);
  auto converted = convert_corpus(data, lex);
  CHECK_FALSE(converted.empty());
  for (const auto &x : converted) {
    CHECK_FALSE(lex.is_academic(std::string_view(x.target)));
    CHECK_FALSE(x.substitutes.empty());
    for (const auto &s : x.substitutes) CHECK(lex.is_academic(std::string_view(s.word)));
  }
}
