#include <doctest.h>

#include <limits>
#include <random>

#include "acadaid/corpus.h"
#include "acadaid/embedding.h"
#include "acadaid/error.h"
#include "acadaid/ngram.h"
#include "acadaid/pos.h"
#include "acadaid/resource.h"
#include "acadaid/text_util.h"
#include "support.h"

using namespace acadaid;

namespace {

Corpus make_corpus(Domain d, const std::vector<testing::Doc> &docs) {
  std::vector<Document> out;
  for (std::size_t i = 0; i < docs.size(); ++i) out.push_back({std::to_string(i), docs[i], d});
  return Corpus(d, std::move(out));
}

std::vector<PhraseKey> all_keys(const FrequencyTable &t) { return t.sorted_keys(); }

std::set<std::string> kept_texts(const std::vector<ResourceEntry> &entries) {
  std::set<std::string> out;
  for (const auto &e : entries) out.insert(e.phrase.text());
  return out;
}

std::vector<testing::Doc> random_docs(std::mt19937_64 &rng, int docs, int len,
                                      const std::vector<std::string> &vocab) {
  std::vector<testing::Doc> out;
  for (int i = 0; i < docs; ++i) {
    testing::Doc d;
    for (int j = 0; j < len; ++j) d.push_back(vocab[rng() % vocab.size()]);
    out.push_back(d);
  }
  return out;
}

}  // namespace

TEST_CASE("ratio boundary is inclusive") {
  const PhraseKey p({"x"});
  FrequencyTable acad, non;
  acad.add(p, 15);
  acad.add(PhraseKey({"pad"}), 1000000 - 15);
  non.add(p, 10);
  non.add(PhraseKey({"pad"}), 1000000 - 10);
  RatioFilterOptions opts;
  opts.threshold = 1.5;
  opts.min_count = 5;
  auto kept = ratio_filter({p}, acad, non, opts);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].acad_rate == doctest::Approx(15.0));
  CHECK(kept[0].nonacad_rate == doctest::Approx(10.0));
  CHECK(kept[0].ratio == doctest::Approx(1.5));

  FrequencyTable acad14;
  acad14.add(p, 14);
  acad14.add(PhraseKey({"pad"}), 1000000 - 14);
  CHECK(ratio_filter({p}, acad14, non, opts).empty());
}

TEST_CASE("zero contrast count gives an infinite ratio; low counts are dropped") {
  FrequencyTable acad, non;
  acad.add(PhraseKey({"only"}), 6);
  acad.add(PhraseKey({"rare"}), 4);
  non.add(PhraseKey({"other"}), 10);
  RatioFilterOptions opts;
  auto kept = ratio_filter({PhraseKey({"only"}), PhraseKey({"rare"})}, acad, non, opts);
  REQUIRE(kept.size() == 1);
  CHECK(std::isinf(kept[0].ratio));
  CHECK_THROWS_AS(ratio_filter({}, acad, non, RatioFilterOptions{0.0, 5}), ArgumentError);
}

TEST_CASE("ratio_filter equals the brute-force oracle on 8-word toy corpora") {
  const std::vector<std::string> vocab = {"model", "data", "the", "we", "great", "love",
                                          "error", "rate"};
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = random_docs(rng, 3, 6 + rng() % 6, vocab);
    auto b = random_docs(rng, 3, 6 + rng() % 6, vocab);
    const int max_n = 1 + trial % 2;  // keeps the phrase count at or under 100
    FrequencyTable ta = count_corpus(make_corpus(Domain::kAcademic, a), max_n);
    FrequencyTable tb = count_corpus(make_corpus(Domain::kNonAcademic, b), max_n);
    REQUIRE(ta.size() <= 100);
    const std::uint64_t min_count = 1 + trial % 3;
    RatioFilterOptions opts{1.5, min_count};
    auto got = kept_texts(ratio_filter(all_keys(ta), ta, tb, opts));
    CHECK(got == testing::ratio_oracle(a, b, max_n, 3, 2, min_count));

    // Same kept set after scaling both corpora by 10 (min count scaled too).
    RatioFilterOptions scaled_opts{1.5, min_count * 10};
    auto scaled = kept_texts(ratio_filter(all_keys(ta), ta.scaled(10), tb.scaled(10), scaled_opts));
    CHECK(scaled == got);
    CHECK(testing::ratio_oracle(a, b, max_n, 3, 2, min_count * 10, 10) == got);

    for (const auto &e : ratio_filter(all_keys(ta), ta, tb, opts)) CHECK(e.ratio >= 1.5);
  }
}

TEST_CASE("identical corpora give an empty resource") {
  std::mt19937_64 rng(43);
  auto docs = random_docs(rng, 4, 20, {"a", "b", "c", "d"});
  auto ta = count_corpus(make_corpus(Domain::kAcademic, docs), 3);
  CHECK(ratio_filter(all_keys(ta), ta, ta, RatioFilterOptions{}).empty());
}

TEST_CASE("build on the toy corpora") {
  Corpus acad = load_corpus(testing::toy("acad.txt"), CorpusFormat::kOneDocPerLine, Domain::kAcademic);
  Corpus non = load_corpus(testing::toy("nonacad.txt"), CorpusFormat::kOneDocPerLine,
                           Domain::kNonAcademic);
  auto emb = EmbeddingTable::load(testing::toy("embeddings.txt"));
  auto tagger = LexiconTagger::load(testing::toy("pos_lexicon.tsv"));
  BuildConfig config;

  BuildResult built = build_resource(acad, non, config, emb, tagger);
  const PhraseKey planted({"error", "rate"});
  REQUIRE(built.resource.contains(planted));
  CHECK(built.resource.find(planted)->label == ResourceLabel::kAcademic);

  // The planted phrase also passes the independent oracle.
  std::vector<testing::Doc> a, b;
  for (const auto &d : acad.documents()) a.push_back(d.tokens);
  for (const auto &d : non.documents()) b.push_back(d.tokens);
  CHECK(testing::ratio_oracle(a, b, 2, 3, 2, 5).count("error rate") == 1);

  for (const auto *e : built.resource.sorted()) {
    CHECK(e->ratio >= 1.5);
    CHECK_FALSE(e->sources.empty());
  }

  SUBCASE("swapping the corpora mirrors the non-academic build") {
    BuildResult non_built = build_nonacademic(acad, non, config, emb, tagger);
    BuildResult swapped = build_resource(non, acad, config, emb, tagger);
    REQUIRE(non_built.resource.size() == swapped.resource.size());
    auto x = non_built.resource.sorted();
    auto y = swapped.resource.sorted();
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(x[i]->phrase == y[i]->phrase);
      CHECK(x[i]->label == ResourceLabel::kNonAcademic);
      CHECK(x[i]->nonacad_rate == y[i]->acad_rate);
      CHECK(x[i]->acad_rate == y[i]->nonacad_rate);
      CHECK((x[i]->ratio == y[i]->ratio || (std::isinf(x[i]->ratio) && std::isinf(y[i]->ratio))));
    }
  }

  SUBCASE("report counts add up") {
    std::uint64_t union_kept = 0;
    for (int n = 1; n <= kMaxNgramOrder; ++n) union_kept += built.report.kept[2][n];
    CHECK(union_kept == built.resource.size());
    for (int n = 1; n <= kMaxNgramOrder; ++n) {
      CHECK(built.report.kept[2][n] <= built.report.candidates[2][n]);
    }
  }
}

TEST_CASE("coverage") {
  FrequencyTable t;
  t.add(PhraseKey({"a"}), 3);
  CHECK(coverage({PhraseKey({"a"})}, t) == 100.0);
  CHECK(coverage({PhraseKey({"a"}), PhraseKey({"b"})}, t) == 50.0);
  CHECK_THROWS_AS(coverage({}, t), ArgumentError);
}

TEST_CASE("resource TSV round trip on random resources") {
  std::mt19937_64 rng(20240611);
  const std::string letters = "abcdefghijklmnopqrstuvwxyz0123456789-'";
  auto word = [&] {
    std::string w;
    std::size_t len = 1 + rng() % 8;
    for (std::size_t i = 0; i < len; ++i) w += letters[rng() % letters.size()];
    return w;
  };
  auto rate = [&] {
    switch (rng() % 4) {
      case 0: return 0.0;
      case 1: return static_cast<double>(rng() % 1000);
      case 2: return uniform_unit(rng) * std::pow(10.0, static_cast<int>(rng() % 12) - 4);
      default: return std::ldexp(uniform_unit(rng), static_cast<int>(rng() % 60) - 30);
    }
  };
  for (int trial = 0; trial < 1000; ++trial) {
    Resource r(0.25 + uniform_unit(rng) * 4);
    std::size_t meta = rng() % 4;
    for (std::size_t i = 0; i < meta; ++i) r.metadata()["key_" + word()] = word() + " " + word();
    std::size_t count = rng() % 12;
    for (std::size_t i = 0; i < count; ++i) {
      ResourceEntry e;
      std::vector<std::string> tokens;
      std::size_t n = 1 + rng() % 4;
      for (std::size_t k = 0; k < n; ++k) tokens.push_back(word());
      e.phrase = PhraseKey(tokens);
      if (r.contains(e.phrase)) continue;
      e.acad_rate = rate();
      e.nonacad_rate = rate();
      e.ratio = rng() % 5 == 0 ? std::numeric_limits<double>::infinity() : rate();
      unsigned bits = rng() % 8;
      if (bits & 1) e.sources.insert(Source::kTfidf);
      if (bits & 2) e.sources.insert(Source::kEmbedRank);
      if (bits & 4) e.sources.insert(Source::kExternal);
      e.label = rng() % 2 ? ResourceLabel::kAcademic : ResourceLabel::kNonAcademic;
      r.insert(e);
    }
    std::string text = format_resource(r);
    Resource back = parse_resource(text, "<trial " + std::to_string(trial) + ">");
    REQUIRE_MESSAGE(back == r, text);
    CHECK(format_resource(back) == text);
  }
}

TEST_CASE("resource parse errors carry the line number") {
  const std::string header = "tokens\tn\tacad_rate\tnonacad_rate\tratio\tsources\tlabel\n";
  auto line_of = [](const std::string &content) -> std::size_t {
    try {
      parse_resource(content, "r.tsv");
    } catch (const ParseError &e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("#threshold\t1.5\n" + header + "a\t2\t1\t1\t1\ttfidf\tacademic\n") == 3);
  CHECK(line_of(header + "a\t1\tx\t1\t1\ttfidf\tacademic\n") == 2);
  CHECK(line_of(header + "a\t1\t1\t1\t1\tbogus\tacademic\n") == 2);
  CHECK(line_of(header + "a\t1\t1\t1\t1\ttfidf\tacademic\na\t1\t1\t1\t1\ttfidf\tacademic\n") == 3);
  CHECK(line_of("a\t1\t1\t1\t1\ttfidf\tacademic\n") == 1);
}

TEST_CASE("load_phrase_list normalizes and deduplicates") {
  testing::TempDir dir("list");
  testing::spit(dir.file("l.txt"), "# comment\nError Rate\nerror rate\nParadigm\n\n");
  auto list = load_phrase_list(dir.file("l.txt"));
  REQUIRE(list.size() == 2);
  CHECK(list[0] == PhraseKey({"error", "rate"}));
  CHECK(list[1] == PhraseKey({"paradigm"}));
}
