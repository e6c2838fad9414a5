#ifndef ACADAID_TFIDF_H_
#define ACADAID_TFIDF_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "acadaid/corpus.h"
#include "acadaid/ngram.h"

namespace acadaid {

using DocumentFrequencies =
    std::unordered_map<PhraseKey, std::uint64_t, PhraseKeyHash>;

// Number of documents containing each phrase of order 1..max_n.
DocumentFrequencies document_frequencies(const Corpus &corpus, int max_n);

// tf * (ln((1 + N) / (1 + df)) + 1). Raw-count tf, smoothed idf, no length
// normalization. Throws ArgumentError when df > num_docs, or when tf > 0
// and df == 0.
double tfidf_score(std::uint64_t tf, std::uint64_t df, std::uint64_t num_docs);

enum class StopwordMode { kKeep, kRemove };

StopwordMode parse_stopword_mode(std::string_view name);

using StopwordSet = std::unordered_set<std::string>;

// One token per line; blank lines and '#' comments are ignored.
StopwordSet load_stopwords(const std::string &path);

struct TfidfScore {
  PhraseKey phrase;
  std::uint64_t tf = 0;
  std::uint64_t df = 0;
  double score = 0.0;
};

struct KeyphraseOptions {
  int k_per_doc = 10;
  StopwordMode stopword_mode = StopwordMode::kKeep;
  int max_n = 4;
  unsigned threads = 1;
};

// Best per-phrase result across all documents that selected it.
struct Keyphrase {
  PhraseKey phrase;
  double best_score = 0.0;
  std::uint64_t df = 0;
};

// Ranked TF-IDF scores of every candidate phrase in one document, best
// first. Ties go to higher tf, then lexicographic phrase order.
std::vector<TfidfScore> score_document(const Document &doc,
                                       const DocumentFrequencies &df,
                                       std::uint64_t num_docs,
                                       const KeyphraseOptions &options,
                                       const StopwordSet &stopwords);

// Union over documents of each document's top k_per_doc phrases, sorted
// by (order, phrase). In kRemove mode phrases containing a stopword are
// excluded before ranking.
std::vector<Keyphrase> top_keyphrases(const Corpus &corpus,
                                      const KeyphraseOptions &options,
                                      const StopwordSet &stopwords = {});

// "tokens\tn\tbest_score\tdf" rows.
std::string format_keyphrases(const std::vector<Keyphrase> &phrases);

}  // namespace acadaid

#endif  // ACADAID_TFIDF_H_
