#include "acadaid/tfidf.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "acadaid/error.h"
#include "acadaid/text_util.h"

namespace acadaid {

DocumentFrequencies document_frequencies(const Corpus &corpus, int max_n) {
  if (max_n < 1 || max_n > kMaxNgramOrder) {
    throw ArgumentError("max_n must be in 1..4, got " + std::to_string(max_n));
  }
  DocumentFrequencies df;
  for (const auto &doc : corpus.documents()) {
    std::unordered_set<PhraseKey, PhraseKeyHash> seen;
    for (int n = 1; n <= max_n; ++n) {
      for (auto &key : extract_ngrams(doc, n)) seen.insert(std::move(key));
    }
    for (const auto &key : seen) ++df[key];
  }
  return df;
}

double tfidf_score(std::uint64_t tf, std::uint64_t df, std::uint64_t num_docs) {
  if (df > num_docs) {
    throw ArgumentError("document frequency " + std::to_string(df) +
                        " exceeds document count " + std::to_string(num_docs));
  }
  if (tf == 0) return 0.0;
  if (df == 0) throw ArgumentError("phrase with tf > 0 must have df >= 1");
  double idf = std::log((1.0 + static_cast<double>(num_docs)) /
                        (1.0 + static_cast<double>(df))) +
               1.0;
  return static_cast<double>(tf) * idf;
}

StopwordMode parse_stopword_mode(std::string_view name) {
  if (name == "keep") return StopwordMode::kKeep;
  if (name == "remove") return StopwordMode::kRemove;
  throw ArgumentError("unknown stopword mode '" + std::string(name) + "'");
}

StopwordSet load_stopwords(const std::string &path) {
  StopwordSet words;
  for (const auto &line : read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    std::string word = normalize_token(line);
    if (!word.empty()) words.insert(word);
  }
  return words;
}

static bool has_stopword(const PhraseKey &key, const StopwordSet &stopwords) {
  for (auto token : split(key.text(), ' ')) {
    if (stopwords.count(std::string(token))) return true;
  }
  return false;
}

std::vector<TfidfScore> score_document(const Document &doc,
                                       const DocumentFrequencies &df,
                                       std::uint64_t num_docs,
                                       const KeyphraseOptions &options,
                                       const StopwordSet &stopwords) {
  std::unordered_map<PhraseKey, std::uint64_t, PhraseKeyHash> tf;
  for (int n = 1; n <= options.max_n; ++n) {
    for (auto &key : extract_ngrams(doc, n)) {
      if (options.stopword_mode == StopwordMode::kRemove &&
          has_stopword(key, stopwords)) {
        continue;
      }
      ++tf[key];
    }
  }
  std::vector<TfidfScore> scores;
  scores.reserve(tf.size());
  for (const auto &[key, count] : tf) {
    auto it = df.find(key);
    std::uint64_t d = it == df.end() ? 0 : it->second;
    scores.push_back({key, count, d, tfidf_score(count, d, num_docs)});
  }
  std::sort(scores.begin(), scores.end(), [](const auto &a, const auto &b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.tf != b.tf) return a.tf > b.tf;
    return a.phrase < b.phrase;
  });
  return scores;
}

std::vector<Keyphrase> top_keyphrases(const Corpus &corpus,
                                      const KeyphraseOptions &options,
                                      const StopwordSet &stopwords) {
  if (options.k_per_doc < 1) throw ArgumentError("k_per_doc must be >= 1");
  const DocumentFrequencies df = document_frequencies(corpus, options.max_n);
  const auto &docs = corpus.documents();
  const std::uint64_t num_docs = docs.size();

  // Per-document top-k lists; df is read-only while workers run.
  std::vector<std::vector<TfidfScore>> selected(docs.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto scores = score_document(docs[i], df, num_docs, options, stopwords);
      if (scores.size() > static_cast<std::size_t>(options.k_per_doc)) {
        scores.resize(options.k_per_doc);
      }
      selected[i] = std::move(scores);
    }
  };
  unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads, docs.size()));
  if (threads <= 1) {
    work(0, docs.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (docs.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t begin = std::min(docs.size(), t * chunk);
      std::size_t end = std::min(docs.size(), begin + chunk);
      pool.emplace_back(work, begin, end);
    }
    for (auto &th : pool) th.join();
  }

  std::map<PhraseKey, Keyphrase> merged;
  for (const auto &list : selected) {
    for (const auto &s : list) {
      auto [it, inserted] = merged.try_emplace(s.phrase,
                                               Keyphrase{s.phrase, s.score, s.df});
      if (!inserted) it->second.best_score = std::max(it->second.best_score, s.score);
    }
  }
  std::vector<Keyphrase> out;
  out.reserve(merged.size());
  for (auto &[key, phrase] : merged) out.push_back(std::move(phrase));
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.phrase.order() < b.phrase.order();
  });
  return out;
}

std::string format_keyphrases(const std::vector<Keyphrase> &phrases) {
  std::string out;
  for (const auto &p : phrases) {
    out += p.phrase.text() + '\t' + std::to_string(p.phrase.order()) + '\t' +
           format_double(p.best_score) + '\t' + std::to_string(p.df) + '\n';
  }
  return out;
}

}  // namespace acadaid
