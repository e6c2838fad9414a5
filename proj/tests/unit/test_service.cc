#include <doctest.h>

#include <thread>

#include "acadaid/error.h"
#include "acadaid/iwi.h"
#include "acadaid/ranker.h"
#include "acadaid/service.h"
#include "httplib.h"
#include "support.h"

using namespace acadaid;

namespace {

// Artifacts with hand-chosen behaviour: the IWI model's decision is the
// constant `bias` (no support vectors), and the ranker scores a candidate
// by log1p of its academic rate.
struct Artifacts {
  testing::TempDir dir{"svc"};
  ServiceConfig config;

  explicit Artifacts(double bias = 1.0) {
    IwiModel iwi(FeatureSet::kFe1, Standardizer({0, 0, 0, 0}, {1, 1, 1, 1}),
                 RbfSvm({}, {}, bias, 1.0), 1, 1);
    save_iwi_model(iwi, dir.file("iwi.json"));
    RankerModel ranker(kCandidateFeatures, 0, RankLoss::kPairwiseLogistic);
    ranker.params()[1] = 1.0;
    save_ranker(ranker, dir.file("ranker.json"));
    testing::spit(dir.file("lex.tsv"),
                  "said\treport\t1\nsaid\tclaim\t1\nsaid\tstate\t1\nsaid\tmention\t1\n"
                  "said\tmake a statement\t1\n");
    config.resource = testing::toy("reporting_verbs_resource.tsv");
    config.iwi_model = dir.file("iwi.json");
    config.ranker_model = dir.file("ranker.json");
    config.lexicons = {dir.file("lex.tsv")};
  }
};

const std::string kExample = "Pacific First Financial Corp said shareholders would vote.";

}  // namespace

TEST_CASE("tokenize_with_offsets") {
  std::string text = "  Hello, (world)! state-of-the-art -- ok";
  auto toks = tokenize_with_offsets(text);
  REQUIRE(toks.size() == 4);
  CHECK(toks[0].text == "Hello");
  CHECK(toks[1].text == "world");
  CHECK(toks[2].text == "state-of-the-art");
  CHECK(toks[2].normalized == "state-of-the-art");
  CHECK(toks[3].text == "ok");
  std::size_t prev = 0;
  for (const auto &t : toks) {
    CHECK(text.substr(t.start, t.end - t.start) == t.text);
    CHECK(t.start >= prev);
    prev = t.end;
  }
  CHECK(tokenize_with_offsets("").empty());
}

TEST_CASE("analyze flags and suggests") {
  Artifacts a;
  auto state = ServiceState::load(a.config);
  REQUIRE(state->ready());
  auto r = analyze(*state, kExample);
  REQUIRE(r.tokens.size() == 8);
  // Every non-academic token is flagged by the constant model.
  CHECK(r.flags.size() == 8);
  REQUIRE(r.suggestions.count(4));
  const auto &s = r.suggestions.at(4);
  REQUIRE(s.size() == 3);
  // Ordered by academic rate: report 60, state 50, claim 40.
  CHECK(s[0].word == "report");
  CHECK(s[1].word == "state");
  CHECK(s[2].word == "claim");
  CHECK(s[0].score == doctest::Approx(std::log1p(60.0)));
  // A flagged word without academic lexicon candidates gets an empty list.
  REQUIRE(r.suggestions.count(0));
  CHECK(r.suggestions.at(0).empty());

  CHECK(analyze(*state, kExample, 1).suggestions.at(4).size() == 1);
  CHECK(analyze(*state, kExample).to_json().dump() == r.to_json().dump());
  for (const auto &[i, c] : r.flags) CHECK(c == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
}

TEST_CASE("academic words are never flagged") {
  Artifacts a;
  auto state = ServiceState::load(a.config);
  CHECK(analyze(*state, "report state claim").flags.empty());
  // Replacing the flagged verb by a suggestion clears that flag.
  auto r = analyze(*state, "Corp report shareholders");
  for (const auto &[i, c] : r.flags) CHECK(r.tokens[i].normalized != "report");
}

TEST_CASE("a negative model flags nothing") {
  Artifacts a(-1.0);
  auto state = ServiceState::load(a.config);
  CHECK(analyze(*state, kExample).flags.empty());
}

TEST_CASE("missing artifacts") {
  Artifacts a;
  a.config.ranker_model = a.dir.file("absent.json");
  auto state = ServiceState::load(a.config);
  CHECK_FALSE(state->ready());
  auto h = state->health();
  CHECK(h["status"] == "degraded");
  bool listed = false;
  for (const auto &m : h["missing"]) listed = listed || m.get<std::string>().find("ranker_model") == 0;
  CHECK(listed);
  CHECK_THROWS_AS(analyze(*state, kExample), UnavailableError);
  CHECK(analyze(*state, "").tokens.empty());

  ServiceConfig none;
  auto empty = ServiceState::load(none);
  CHECK_THROWS_AS(lookup(*empty, "report"), UnavailableError);
}

TEST_CASE("health with everything loaded") {
  Artifacts a;
  auto h = ServiceState::load(a.config)->health();
  CHECK(h["status"] == "ok");
  CHECK(h["counts"]["resource_entries"] == 7);
  CHECK(h["missing"].empty());
}

TEST_CASE("corrupt artifact raises") {
  Artifacts a;
  testing::spit(a.dir.file("iwi.json"), "{broken");
  CHECK_THROWS(ServiceState::load(a.config));
}

TEST_CASE("lookup normalizes the query") {
  Artifacts a;
  auto state = ServiceState::load(a.config);
  auto e = lookup(*state, "REPORT");
  REQUIRE(e);
  CHECK(e->phrase.text() == "report");
  CHECK_FALSE(lookup(*state, "nonexistent"));
  auto j = entry_to_json(*e);
  CHECK(j["label"] == "academic");
  CHECK(j["acad_rate"] == 60.0);
}

TEST_CASE("HTTP endpoints") {
  Artifacts a;
  ServiceConfig config = a.config;
  WritingAidServer server([config] { return ServiceState::load(config); }, "http://editor.test");
  int port = server.bind_any("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  for (int i = 0; i < 200 && !server.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));

  httplib::Client client("127.0.0.1", port);
  {
    auto res = client.Post("/analyze", nlohmann::json{{"text", kExample}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://editor.test");
    auto body = nlohmann::json::parse(res->body);
    CHECK(body["tokens"].size() == 8);
    bool said_flagged = false;
    for (const auto &f : body["flags"]) said_flagged = said_flagged || f["token_index"] == 4;
    CHECK(said_flagged);
    bool suggested = false;
    for (const auto &s : body["suggestions"]) {
      if (s["token_index"] == 4) suggested = s["candidates"][0]["word"] == "report";
    }
    CHECK(suggested);
  }
  {
    auto res = client.Post("/analyze", "{nope", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(client.Post("/analyze", R"({"text": 3})", "application/json")->status == 400);
    CHECK(client.Post("/analyze", R"({"text": "x", "k": -1})", "application/json")->status == 400);
  }
  {
    auto res = client.Get("/resource/lookup?phrase=Report");
    REQUIRE(res);
    CHECK(res->status == 200);
    auto body = nlohmann::json::parse(res->body);
    CHECK(body["found"] == true);
    CHECK(body["entry"]["phrase"] == "report");
    CHECK(client.Get("/resource/lookup?phrase=zebra")->status == 404);
    CHECK(client.Get("/resource/lookup")->status == 400);
  }
  {
    auto res = client.Get("/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(nlohmann::json::parse(res->body)["status"] == "ok");
  }
  {
    auto res = client.Options("/analyze");
    REQUIRE(res);
    CHECK(res->status == 204);
    CHECK(res->get_header_value("Access-Control-Allow-Methods") == "GET, POST, OPTIONS");
    CHECK(res->get_header_value("Access-Control-Allow-Headers") == "Content-Type");
  }
  server.stop();
  worker.join();
}

TEST_CASE("HTTP reports 503 without artifacts and reload swaps state") {
  Artifacts a;
  ServiceConfig config = a.config;
  bool broken = true;
  std::mutex mu;
  WritingAidServer server(
      [&] {
        std::lock_guard<std::mutex> lock(mu);
        if (broken) return ServiceState::load(ServiceConfig{});
        return ServiceState::load(config);
      },
      "*");
  int port = server.bind_any("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  for (int i = 0; i < 200 && !server.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  httplib::Client client("127.0.0.1", port);

  CHECK(client.Post("/analyze", R"({"text": "said"})", "application/json")->status == 503);
  CHECK(client.Get("/resource/lookup?phrase=report")->status == 503);
  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(nlohmann::json::parse(health->body)["status"] == "degraded");

  {
    std::lock_guard<std::mutex> lock(mu);
    broken = false;
  }
  CHECK(server.reload());
  CHECK(client.Post("/analyze", R"({"text": "said"})", "application/json")->status == 200);

  // A failing reload keeps the working state.
  testing::spit(a.dir.file("ranker.json"), "{broken");
  std::string error;
  CHECK_FALSE(server.reload(&error));
  CHECK_FALSE(error.empty());
  CHECK(client.Post("/analyze", R"({"text": "said"})", "application/json")->status == 200);

  server.stop();
  worker.join();
}
