#ifndef ACADAID_SERVICE_H_
#define ACADAID_SERVICE_H_

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acadaid/embedding.h"
#include "acadaid/iwi.h"
#include "acadaid/lexsub.h"
#include "acadaid/ngram.h"
#include "acadaid/pos.h"
#include "acadaid/ranker.h"
#include "acadaid/resource.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace acadaid {

// Artifact paths. Empty paths are simply not loaded; the three required
// artifacts (resource, IWI model, ranker model) make the service degraded
// when they are not available.
struct ServiceConfig {
  std::string resource;
  std::string iwi_model;
  std::string ranker_model;
  std::vector<std::string> lexicons;
  std::vector<std::string> external_lists;
  std::string embeddings;
  std::string web_freq;
  std::string general_freq;
  std::string academic_freq;
  std::string pos_lexicon;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
};

// Immutable snapshot of everything a request needs.
class ServiceState {
 public:
  // Absent files are recorded in missing(); files that exist but fail to
  // parse raise the underlying error.
  static std::shared_ptr<const ServiceState> load(const ServiceConfig &config);

  bool ready() const { return resource_ && iwi_ && ranker_; }
  const std::vector<std::string> &missing() const { return missing_; }

  const Resource *resource() const { return resource_ ? &*resource_ : nullptr; }
  const IwiModel *iwi_model() const { return iwi_ ? &*iwi_ : nullptr; }
  const RankerModel *ranker() const { return ranker_ ? &*ranker_ : nullptr; }
  const AcademicLexicon &lexicon() const { return lexicon_; }
  const std::vector<SynonymLexicon> &lexicons() const { return lexicons_; }
  FeatureContext feature_context() const;
  RankerContext ranker_context() const;

  nlohmann::json health() const;

 private:
  ServiceState() = default;

  std::optional<Resource> resource_;
  std::optional<IwiModel> iwi_;
  std::optional<RankerModel> ranker_;
  std::vector<SynonymLexicon> lexicons_;
  std::vector<std::set<PhraseKey>> external_;
  std::optional<EmbeddingTable> embeddings_;
  std::optional<UnigramList> web_, general_, academic_;
  std::optional<LexiconTagger> tagger_;
  AcademicLexicon lexicon_;
  std::vector<std::string> missing_;
  std::map<std::string, std::size_t> counts_;
};

struct TextToken {
  std::string text;   // the original slice
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive byte offset
  std::string normalized;
};

// Whitespace chunks with leading and trailing characters outside
// [A-Za-z0-9'-] trimmed; chunks that trim to nothing are skipped.
std::vector<TextToken> tokenize_with_offsets(std::string_view text);

struct Suggestion {
  std::string word;
  double score = 0.0;
};

struct AnalysisResult {
  std::vector<TextToken> tokens;
  std::vector<std::pair<std::size_t, double>> flags;  // token index, confidence
  std::map<std::size_t, std::vector<Suggestion>> suggestions;

  nlohmann::json to_json() const;
};

// Throws UnavailableError when a required artifact is missing.
AnalysisResult analyze(const ServiceState &state, std::string_view text, std::size_t k = 4);

std::optional<ResourceEntry> lookup(const ServiceState &state, std::string_view phrase);
nlohmann::json entry_to_json(const ResourceEntry &entry);

// HTTP front end over a swappable state snapshot.
class WritingAidServer {
 public:
  using Loader = std::function<std::shared_ptr<const ServiceState>()>;

  WritingAidServer(Loader loader, std::string cors_origin = "*");
  ~WritingAidServer();

  std::shared_ptr<const ServiceState> state() const;
  // Loads a fresh snapshot and swaps it in; keeps the old one on failure.
  bool reload(std::string *error = nullptr);

  // Binds and serves until stop(). Returns false if binding fails.
  bool listen(const std::string &host, int port);
  bool bind(const std::string &host, int port);
  // Binds to an ephemeral port; returns it, or -1.
  int bind_any(const std::string &host);
  bool listen_after_bind();
  void stop();
  bool running() const;

 private:
  void install_routes();

  Loader loader_;
  std::string cors_origin_;
  mutable std::mutex mu_;
  std::shared_ptr<const ServiceState> state_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace acadaid

#endif  // ACADAID_SERVICE_H_
