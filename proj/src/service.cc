#include "acadaid/service.h"

#include <algorithm>
#include <filesystem>
#include <unordered_set>

#include "acadaid/corpus.h"
#include "acadaid/error.h"
#include "httplib.h"

namespace acadaid {

using nlohmann::json;

namespace {

// Loads `path` with `fn` when it exists, otherwise records the gap.
template <typename T, typename Fn>
std::optional<T> load_optional(const std::string &name, const std::string &path,
                               std::vector<std::string> &missing, Fn fn) {
  if (path.empty()) return std::nullopt;
  if (!std::filesystem::exists(path)) {
    missing.push_back(name + ": " + path);
    return std::nullopt;
  }
  return fn(path);
}

}  // namespace

std::shared_ptr<const ServiceState> ServiceState::load(const ServiceConfig &config) {
  std::shared_ptr<ServiceState> s(new ServiceState());
  auto &missing = s->missing_;
  auto require = [&](const std::string &name, const std::string &path) {
    if (path.empty()) missing.push_back(name + ": not configured");
  };
  require("resource", config.resource);
  require("iwi_model", config.iwi_model);
  require("ranker_model", config.ranker_model);

  s->resource_ = load_optional<Resource>("resource", config.resource, missing, read_resource);
  s->iwi_ = load_optional<IwiModel>("iwi_model", config.iwi_model, missing, load_iwi_model);
  s->ranker_ = load_optional<RankerModel>("ranker_model", config.ranker_model, missing, load_ranker);
  s->embeddings_ = load_optional<EmbeddingTable>("embeddings", config.embeddings, missing,
                                                 EmbeddingTable::load);
  s->web_ = load_optional<UnigramList>("web_freq", config.web_freq, missing, UnigramList::load);
  s->general_ = load_optional<UnigramList>("general_freq", config.general_freq, missing,
                                           UnigramList::load);
  s->academic_ = load_optional<UnigramList>("academic_freq", config.academic_freq, missing,
                                            UnigramList::load);
  s->tagger_ = load_optional<LexiconTagger>("pos_lexicon", config.pos_lexicon, missing,
                                            LexiconTagger::load);
  for (const auto &path : config.lexicons) {
    if (auto lex = load_optional<SynonymLexicon>("lexicon", path, missing, SynonymLexicon::load)) {
      s->lexicons_.push_back(std::move(*lex));
    }
  }
  for (const auto &path : config.external_lists) {
    if (auto list = load_optional<std::vector<PhraseKey>>("external_list", path, missing,
                                                          load_phrase_list)) {
      s->external_.emplace_back(list->begin(), list->end());
    }
  }
  s->lexicon_ = AcademicLexicon(s->resource(), s->external_);

  s->counts_["resource_entries"] = s->resource_ ? s->resource_->size() : 0;
  s->counts_["lexicons"] = s->lexicons_.size();
  s->counts_["external_lists"] = s->external_.size();
  s->counts_["embedding_words"] = s->embeddings_ ? s->embeddings_->size() : 0;
  s->counts_["iwi_support_vectors"] = s->iwi_ ? s->iwi_->svm().support_vectors().size() : 0;
  s->counts_["ranker_parameters"] = s->ranker_ ? s->ranker_->params().size() : 0;
  return s;
}

FeatureContext ServiceState::feature_context() const {
  FeatureContext ctx;
  if (web_) ctx.web = &*web_;
  if (general_) ctx.general = &*general_;
  if (academic_) ctx.academic = &*academic_;
  if (embeddings_) ctx.embeddings = &*embeddings_;
  if (tagger_) ctx.tagger = &*tagger_;
  return ctx;
}

RankerContext ServiceState::ranker_context() const {
  RankerContext ctx;
  ctx.resource = resource();
  if (embeddings_) ctx.embeddings = &*embeddings_;
  return ctx;
}

json ServiceState::health() const {
  json j;
  j["status"] = missing_.empty() && ready() ? "ok" : "degraded";
  j["missing"] = missing_;
  j["counts"] = counts_;
  json versions = json::object();
  if (iwi_) {
    versions["iwi_model"] = {{"version", 1},
                             {"feature_set", feature_set_name(iwi_->feature_set())}};
  }
  if (ranker_) {
    versions["ranker_model"] = {{"version", 1}, {"loss", rank_loss_name(ranker_->loss())}};
  }
  if (resource_) versions["resource"] = {{"threshold", resource_->threshold()}};
  j["artifacts"] = versions;
  return j;
}

std::vector<TextToken> tokenize_with_offsets(std::string_view text) {
  std::vector<TextToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t end = i;
    while (start < end && !std::isalnum(static_cast<unsigned char>(text[start]))) ++start;
    while (end > start && !std::isalnum(static_cast<unsigned char>(text[end - 1]))) --end;
    if (start == end) continue;
    TextToken tok;
    tok.text = std::string(text.substr(start, end - start));
    tok.start = start;
    tok.end = end;
    tok.normalized = normalize_token(tok.text);
    if (tok.normalized.empty()) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

json AnalysisResult::to_json() const {
  json j;
  j["tokens"] = json::array();
  for (const auto &t : tokens) {
    j["tokens"].push_back({{"text", t.text}, {"start", t.start}, {"end", t.end}});
  }
  j["flags"] = json::array();
  for (const auto &[index, confidence] : flags) {
    j["flags"].push_back({{"token_index", index}, {"confidence", confidence}});
  }
  j["suggestions"] = json::array();
  for (const auto &[index, list] : suggestions) {
    json cands = json::array();
    for (const auto &s : list) cands.push_back({{"word", s.word}, {"score", s.score}});
    j["suggestions"].push_back({{"token_index", index}, {"candidates", cands}});
  }
  return j;
}

AnalysisResult analyze(const ServiceState &state, std::string_view text, std::size_t k) {
  AnalysisResult result;
  result.tokens = tokenize_with_offsets(text);
  if (result.tokens.empty()) return result;
  if (!state.ready()) {
    throw UnavailableError("required artifacts are not loaded");
  }
  const IwiModel &iwi = *state.iwi_model();
  const RankerModel &ranker = *state.ranker();
  const FeatureContext fctx = state.feature_context();
  const RankerContext rctx = state.ranker_context();

  std::vector<std::string> words;
  for (const auto &t : result.tokens) words.push_back(t.normalized);

  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string &word = words[i];
    if (state.lexicon().is_academic(word)) continue;
    Vector x = featurize_token(words, i, fctx).to_vector(iwi.feature_set());
    if (iwi.predict(x) != IwiLabel::kInformal) continue;
    result.flags.emplace_back(i, iwi.informal_confidence(x));

    std::vector<Suggestion> cands;
    std::unordered_set<std::string> seen = {word};
    for (const auto &lex : state.lexicons()) {
      for (const auto &entry : lex.lookup(word)) {
        if (entry.word.find(' ') != std::string::npos) continue;
        if (!seen.insert(entry.word).second) continue;
        if (!state.lexicon().is_academic(entry.word)) continue;
        cands.push_back({entry.word,
                         ranker.score(candidate_features(entry.word, true, words, word, rctx))});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Suggestion &a, const Suggestion &b) {
      if (a.score != b.score) return a.score > b.score;
      return a.word < b.word;
    });
    if (cands.size() > k) cands.resize(k);
    result.suggestions[i] = std::move(cands);
  }
  return result;
}

std::optional<ResourceEntry> lookup(const ServiceState &state, std::string_view phrase) {
  if (!state.resource()) throw UnavailableError("resource is not loaded");
  auto tokens = normalize_tokens(phrase);
  if (tokens.empty() || tokens.size() > kMaxNgramOrder) return std::nullopt;
  if (const ResourceEntry *e = state.resource()->find(PhraseKey(tokens))) return *e;
  return std::nullopt;
}

json entry_to_json(const ResourceEntry &entry) {
  json ratio = std::isinf(entry.ratio) ? json("inf") : json(entry.ratio);
  return {{"phrase", entry.phrase.text()},
          {"n", entry.n()},
          {"acad_rate", entry.acad_rate},
          {"nonacad_rate", entry.nonacad_rate},
          {"ratio", ratio},
          {"sources", entry.sources.to_string()},
          {"label", std::string(label_name(entry.label))}};
}

WritingAidServer::WritingAidServer(Loader loader, std::string cors_origin)
    : loader_(std::move(loader)),
      cors_origin_(std::move(cors_origin)),
      server_(std::make_unique<httplib::Server>()) {
  state_ = loader_();
  install_routes();
}

WritingAidServer::~WritingAidServer() { stop(); }

std::shared_ptr<const ServiceState> WritingAidServer::state() const {
  std::lock_guard<std::mutex> lock(mu_);
  return state_;
}

bool WritingAidServer::reload(std::string *error) {
  try {
    auto fresh = loader_();
    std::lock_guard<std::mutex> lock(mu_);
    state_ = std::move(fresh);
    return true;
  } catch (const std::exception &e) {
    if (error) *error = e.what();
    return false;
  }
}

void WritingAidServer::install_routes() {
  auto &srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", cors_origin_},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  auto send = [](httplib::Response &res, int status, const json &body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };

  srv.Options(R"(/.*)", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });

  srv.Get("/health", [this, send](const httplib::Request &, httplib::Response &res) {
    send(res, 200, state()->health());
  });

  srv.Post("/analyze", [this, send](const httplib::Request &req, httplib::Response &res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error &) {
      return send(res, 400, {{"error", "request body is not valid JSON"}});
    }
    if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
      return send(res, 400, {{"error", "\"text\" must be a string"}});
    }
    std::size_t k = 4;
    if (body.contains("k")) {
      if (!body["k"].is_number_integer() || body["k"].get<std::int64_t>() < 0) {
        return send(res, 400, {{"error", "\"k\" must be a non-negative integer"}});
      }
      k = body["k"].get<std::size_t>();
    }
    try {
      send(res, 200, analyze(*state(), body["text"].get<std::string>(), k).to_json());
    } catch (const UnavailableError &e) {
      send(res, 503, {{"error", e.what()}});
    }
  });

  srv.Get("/resource/lookup", [this, send](const httplib::Request &req, httplib::Response &res) {
    if (!req.has_param("phrase")) {
      return send(res, 400, {{"error", "missing \"phrase\" parameter"}});
    }
    std::string phrase = req.get_param_value("phrase");
    try {
      if (auto entry = lookup(*state(), phrase)) {
        send(res, 200, {{"found", true}, {"entry", entry_to_json(*entry)}});
      } else {
        send(res, 404, {{"found", false}, {"phrase", phrase}});
      }
    } catch (const UnavailableError &e) {
      send(res, 503, {{"error", e.what()}});
    }
  });
}

bool WritingAidServer::listen(const std::string &host, int port) {
  return server_->listen(host, port);
}

bool WritingAidServer::bind(const std::string &host, int port) {
  return server_->bind_to_port(host, port);
}

int WritingAidServer::bind_any(const std::string &host) {
  return server_->bind_to_any_port(host);
}

bool WritingAidServer::listen_after_bind() { return server_->listen_after_bind(); }

void WritingAidServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

bool WritingAidServer::running() const { return server_->is_running(); }

}  // namespace acadaid
