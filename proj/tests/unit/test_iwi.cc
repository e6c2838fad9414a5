#include <doctest.h>

#include <random>

#include "acadaid/embedding.h"
#include "acadaid/error.h"
#include "acadaid/iwi.h"
#include "acadaid/svm.h"
#include "acadaid/text_util.h"
#include "support.h"

using namespace acadaid;

namespace {

std::vector<bool> informal_flags(const std::vector<IwiLabel> &labels) {
  std::vector<bool> out;
  for (auto l : labels) out.push_back(l == IwiLabel::kInformal);
  return out;
}

// Two Gaussian blobs in d dimensions, centres 2 apart per coordinate.
FeatureRows blobs(std::mt19937_64 &rng, std::size_t n, std::size_t d) {
  FeatureRows out;
  for (std::size_t i = 0; i < n; ++i) {
    bool informal = i % 2 == 0;
    Vector row(d);
    for (auto &v : row) v = (informal ? 1.0 : -1.0) + 0.5 * standard_normal(rng);
    out.rows.push_back(row);
    out.labels.push_back(informal ? IwiLabel::kInformal : IwiLabel::kFormal);
  }
  return out;
}

}  // namespace

TEST_CASE("RBF kernel values") {
  std::vector<double> a = {0, 0}, b = {1, 1};
  CHECK(rbf_kernel(a, a, 0.7) == 1.0);
  CHECK(rbf_kernel(a, b, 0.5) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("SVM separates two points") {
  SvmParams p;
  p.gamma = 1.0;
  auto sol = train_rbf_svm({{0.0, 0.0}, {1.0, 1.0}}, {1, -1}, p);
  std::vector<double> x0 = {0, 0}, x1 = {1, 1};
  CHECK(sol.model.decision(x0) > 0);
  CHECK(sol.model.decision(x1) < 0);
}

TEST_CASE("SVM fits XOR and satisfies the dual optimality conditions") {
  std::vector<Vector> x = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  std::vector<int> y = {1, 1, -1, -1};
  SvmParams p;
  p.gamma = 2.0;
  p.c = 10.0;
  p.tolerance = 1e-6;
  auto sol = train_rbf_svm(x, y, p);
  CHECK(sol.converged);
  double balance = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = sol.model.decision(x[i]);
    CHECK(f * y[i] > 0);
    double a = sol.alpha[i];
    CHECK(a >= -1e-12);
    CHECK(a <= p.c + 1e-12);
    balance += a * y[i];
    const double margin = y[i] * f;
    if (a < 1e-8) CHECK(margin >= 1 - 1e-4);
    else if (a < p.c - 1e-8) CHECK(margin == doctest::Approx(1.0).epsilon(1e-4));
    else CHECK(margin <= 1 + 1e-4);
  }
  CHECK(std::abs(balance) < 1e-9);
  // No linear separator exists: every w, b misclassifies some XOR corner.
  for (double w1 = -2; w1 <= 2; w1 += 0.25) {
    for (double w2 = -2; w2 <= 2; w2 += 0.25) {
      for (double b = -2; b <= 2; b += 0.25) {
        bool all = true;
        for (std::size_t i = 0; i < 4; ++i) all = all && (w1 * x[i][0] + w2 * x[i][1] + b) * y[i] > 0;
        CHECK_FALSE(all);
      }
    }
  }
}

TEST_CASE("contradictory duplicates still train") {
  std::vector<Vector> x = {{0, 0}, {0, 0}, {3, 3}, {3, 3}};
  std::vector<int> y = {1, -1, 1, -1};
  SvmParams p;
  p.gamma = 1.0;
  auto sol = train_rbf_svm(x, y, p);
  int correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) correct += (sol.model.decision(x[i]) > 0) == (y[i] > 0);
  CHECK(correct <= 2);
}

TEST_CASE("SVM argument checks") {
  SvmParams p;
  CHECK_THROWS_AS(train_rbf_svm({{0.0}}, {1}, p), ArgumentError);  // gamma unset
  p.gamma = 1;
  CHECK_THROWS_AS(train_rbf_svm({{0.0}, {1.0}}, {1}, p), ArgumentError);
}

TEST_CASE("standardized training features have zero mean and unit spread") {
  std::mt19937_64 rng(61);
  std::vector<Vector> rows;
  for (int i = 0; i < 300; ++i) {
    rows.push_back({100 + 50 * standard_normal(rng), 1e-3 * standard_normal(rng), 7.0,
                    uniform_unit(rng)});
  }
  auto s = Standardizer::fit(rows);
  std::vector<double> mean(4, 0), sq(4, 0);
  for (const auto &r : rows) {
    auto z = s.apply(r);
    for (int k = 0; k < 4; ++k) mean[k] += z[k] / rows.size();
  }
  for (const auto &r : rows) {
    auto z = s.apply(r);
    for (int k = 0; k < 4; ++k) sq[k] += (z[k] - mean[k]) * (z[k] - mean[k]) / rows.size();
  }
  for (int k = 0; k < 4; ++k) CHECK(std::abs(mean[k]) < 1e-9);
  for (int k : {0, 1, 3}) CHECK(std::abs(std::sqrt(sq[k]) - 1) < 1e-9);
  CHECK(s.scale()[2] == 1.0);  // constant column passes through unscaled
  CHECK(sq[2] == 0.0);
}

TEST_CASE("IWI training errors") {
  IwiHyperparams h;
  CHECK_THROWS_AS(train_iwi_rows({}, {}, FeatureSet::kFe1, h), TrainingError);
  CHECK_THROWS_AS(train_iwi_rows({{1, 2, 3, 4}, {2, 3, 4, 5}},
                                 {IwiLabel::kInformal, IwiLabel::kInformal}, FeatureSet::kFe1, h),
                  TrainingError);
  CHECK_THROWS_AS(train_iwi_rows({{1, 2, 3}}, {IwiLabel::kInformal}, FeatureSet::kFe1, h),
                  ArgumentError);
}

TEST_CASE("IWI model predictions") {
  std::mt19937_64 rng(67);
  FeatureRows train = blobs(rng, 200, 4), test = blobs(rng, 200, 4);
  IwiHyperparams h;
  IwiModel model = train_iwi_rows(train.rows, train.labels, FeatureSet::kFe1, h);

  SUBCASE("held-out blobs are classified well") {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.rows.size(); ++i) correct += model.predict(test.rows[i]) == test.labels[i];
    CHECK(static_cast<double>(correct) / test.rows.size() >= 0.9);
  }
  SUBCASE("training order does not matter") {
    std::vector<std::size_t> perm(train.rows.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    FeatureRows shuffled;
    for (auto i : perm) {
      shuffled.rows.push_back(train.rows[i]);
      shuffled.labels.push_back(train.labels[i]);
    }
    IwiModel other = train_iwi_rows(shuffled.rows, shuffled.labels, FeatureSet::kFe1, h);
    for (const auto &r : test.rows) CHECK(other.decision_value(r) == model.decision_value(r));
  }
  SUBCASE("dimension mismatch") {
    std::vector<double> bad = {1, 2, 3};
    CHECK_THROWS_AS(model.predict(bad), ArgumentError);
  }
  SUBCASE("confidence is a logistic of the decision value") {
    for (const auto &r : test.rows) {
      double c = model.informal_confidence(r);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      CHECK((c > 0.5) == (model.predict(r) == IwiLabel::kInformal));
    }
  }
  SUBCASE("JSON round trip keeps decisions") {
    testing::TempDir dir("iwi");
    save_iwi_model(model, dir.file("m.json"));
    IwiModel back = load_iwi_model(dir.file("m.json"));
    for (const auto &r : test.rows) CHECK(back.decision_value(r) == model.decision_value(r));
    CHECK(back.train_informal() == model.train_informal());
    testing::spit(dir.file("bad.json"), "{not json");
    CHECK_THROWS_AS(load_iwi_model(dir.file("bad.json")), ParseError);
  }
}

TEST_CASE("a zero decision value is labeled formal") {
  // One informal and one formal support vector at equal distance from the
  // query, equal weights, no bias: the decision is exactly zero.
  RbfSvm svm({{1, 0, 0, 0}, {-1, 0, 0, 0}}, {1.0, -1.0}, 0.0, 0.5);
  IwiModel model(FeatureSet::kFe1, Standardizer({0, 0, 0, 0}, {1, 1, 1, 1}), svm, 1, 1);
  std::vector<double> mid = {0, 0, 0, 0};
  CHECK(model.decision_value(mid) == 0.0);
  CHECK(model.predict(mid) == IwiLabel::kFormal);
  CHECK(model.informal_confidence(mid) == 0.5);
}

TEST_CASE("token features") {
  FeatureContext empty;
  auto a = featurize_token({"a"}, 0, empty);
  CHECK(a.word_length == 1);
  CHECK(a.vowel_count == 1);
  CHECK(a.pos_onehot[static_cast<std::size_t>(PosTag::kNoun)] == 1.0);

  EmbeddingTable t;
  std::vector<double> v = {3, 4};
  t.add("solo", v);
  FeatureContext ctx;
  ctx.embeddings = &t;
  auto solo = featurize_token({"solo"}, 0, ctx);
  CHECK(solo.cos_word_sent == doctest::Approx(1.0));
  CHECK(solo.eucl_word_sent == doctest::Approx(0.0));

  auto oov = featurize_token({"solo", "zzz"}, 1, ctx);
  CHECK(oov.cos_word_sent == 0.0);
  CHECK(oov.eucl_word_sent == doctest::Approx(5.0));  // the sentence vector's norm

  CHECK(feature_dim(FeatureSet::kFe1) == 4);
  CHECK(feature_dim(FeatureSet::kFe2) == 5);
  CHECK(feature_dim(FeatureSet::kFe3) == 19);
  CHECK(a.to_vector(FeatureSet::kFe3).size() == 19);
}

TEST_CASE("'said' features against hand arithmetic") {
  // 2-d vectors: mean of the six = (5, 4) / 6; said = (0, 2).
  // cos = (8/6) / (2 * sqrt(41)/6) = 4 / sqrt(41); distance = sqrt(89) / 6.
  EmbeddingTable t;
  const std::vector<std::pair<std::string, std::vector<double>>> vecs = {
      {"pacific", {1, 0}}, {"first", {0, 1}}, {"financial", {1, 1}},
      {"corp", {2, 0}},    {"said", {0, 2}},  {"shareholders", {1, 0}}};
  for (const auto &[w, v] : vecs) t.add(w, v);
  UnigramList web;
  web.add("said", 3);
  web.add("other", 1);
  FeatureContext ctx;
  ctx.embeddings = &t;
  ctx.web = &web;
  IWIInstance x{"ex1", {"Pacific", "First", "Financial", "Corp", "said", "shareholders"}, 4,
                IwiLabel::kInformal};
  auto f = featurize(x, ctx);
  CHECK(f.cos_word_sent == doctest::Approx(4.0 / std::sqrt(41.0)).epsilon(1e-6));
  CHECK(f.eucl_word_sent == doctest::Approx(std::sqrt(89.0) / 6.0).epsilon(1e-6));
  CHECK(f.freq_web == doctest::Approx(750000.0));
  CHECK(f.word_length == 4);
  CHECK(f.vowel_count == 2);
  CHECK(featurize(x, ctx) == f);  // pure
}

TEST_CASE("stratified baseline") {
  std::vector<IwiLabel> all_informal(20, IwiLabel::kInformal);
  auto b = stratified_baseline(all_informal, 1);
  for (auto l : b.predict(100)) CHECK(l == IwiLabel::kInformal);

  std::vector<IwiLabel> half;
  for (int i = 0; i < 100; ++i) half.push_back(i % 2 ? IwiLabel::kInformal : IwiLabel::kFormal);
  double mean_fraction = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto preds = stratified_baseline(half, seed).predict(10000);
    double frac = std::count(preds.begin(), preds.end(), IwiLabel::kInformal) / 10000.0;
    CHECK(std::abs(frac - 0.5) < 0.02);
    mean_fraction += frac / 5;
  }
  CHECK(std::abs(mean_fraction - 0.5) < 0.02);
  CHECK(stratified_baseline(half, 9).predict(500) == stratified_baseline(half, 9).predict(500));
  CHECK_THROWS_AS(StratifiedBaseline(1.5, 0), ArgumentError);
}

TEST_CASE("evaluate") {
  using enum IwiLabel;
  auto perfect = evaluate({kInformal, kFormal}, {kInformal, kFormal});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  // TP=3, FP=1, FN=1
  auto s = evaluate({kInformal, kInformal, kInformal, kInformal, kFormal, kFormal},
                    {kInformal, kInformal, kInformal, kFormal, kInformal, kFormal});
  CHECK(s.tp == 3);
  CHECK(s.fp == 1);
  CHECK(s.fn == 1);
  CHECK(s.precision == doctest::Approx(0.75));
  CHECK(s.recall == doctest::Approx(0.75));
  CHECK(s.f1 == doctest::Approx(0.75));

  CHECK_THROWS_AS(evaluate({}, {}), ArgumentError);
  CHECK_THROWS_AS(evaluate({kFormal}, {kFormal, kFormal}), ArgumentError);
}

TEST_CASE("evaluate agrees with a confusion-matrix oracle") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 1 + rng() % 30;
    std::vector<IwiLabel> pred, gold;
    for (std::size_t i = 0; i < n; ++i) {
      pred.push_back(rng() % 2 ? IwiLabel::kInformal : IwiLabel::kFormal);
      gold.push_back(rng() % 2 ? IwiLabel::kInformal : IwiLabel::kFormal);
    }
    auto s = evaluate(pred, gold);
    auto c = testing::confusion(informal_flags(pred), informal_flags(gold));
    CHECK(s.tp == c.tp);
    CHECK(s.fp == c.fp);
    CHECK(s.fn == c.fn);
    CHECK(s.tn == c.tn);
    double p = c.tp + c.fp ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
    double r = c.tp + c.fn ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
    CHECK(s.precision == p);
    CHECK(s.recall == r);
    if (p + r > 0) CHECK(std::abs(s.f1 - 2 * p * r / (p + r)) < 1e-12);
    else CHECK(s.f1 == 0.0);
  }
}

TEST_CASE("feature rows file") {
  testing::TempDir dir("rows");
  testing::spit(dir.file("r.tsv"), "# label\tf\ninformal\t1\t2\t3\t4\nformal\t5\t6\t7\t8\n");
  auto rows = load_feature_rows(dir.file("r.tsv"));
  REQUIRE(rows.rows.size() == 2);
  CHECK(rows.labels[0] == IwiLabel::kInformal);
  CHECK(rows.rows[1] == Vector{5, 6, 7, 8});
  testing::spit(dir.file("bad.tsv"), "informal\t1\t2\nformal\t1\n");
  CHECK_THROWS_AS(load_feature_rows(dir.file("bad.tsv")), ParseError);
}
