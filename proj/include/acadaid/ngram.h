#ifndef ACADAID_NGRAM_H_
#define ACADAID_NGRAM_H_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "acadaid/corpus.h"

namespace acadaid {

inline constexpr int kMaxNgramOrder = 4;

// A sequence of 1..4 normalized tokens, stored space-joined. Normalized
// tokens never contain spaces, and ' ' sorts below every token character,
// so comparing the joined text is the same as comparing token sequences.
class PhraseKey {
 public:
  PhraseKey() = default;
  explicit PhraseKey(std::span<const std::string> tokens);
  PhraseKey(std::initializer_list<std::string_view> tokens);

  // Parses space-joined text, normalizing each token. Throws ArgumentError
  // when the result is empty or longer than four tokens.
  static PhraseKey parse(std::string_view text);

  const std::string &text() const { return text_; }
  int order() const { return order_; }
  std::vector<std::string> tokens() const;
  bool empty() const { return order_ == 0; }

  friend bool operator==(const PhraseKey &a, const PhraseKey &b) {
    return a.text_ == b.text_;
  }
  friend auto operator<=>(const PhraseKey &a, const PhraseKey &b) {
    return a.text_ <=> b.text_;
  }

 private:
  std::string text_;
  int order_ = 0;
};

struct PhraseKeyHash {
  std::size_t operator()(const PhraseKey &key) const {
    return std::hash<std::string>()(key.text());
  }
};

// Contiguous windows of length n in document order. Throws ArgumentError
// when n is outside 1..4.
std::vector<PhraseKey> extract_ngrams(const Document &doc, int n);
std::vector<PhraseKey> extract_ngrams(std::span<const std::string> tokens,
                                      int n);

// Exact phrase counts for orders 1..4 plus per-order totals.
class FrequencyTable {
 public:
  using CountMap = std::unordered_map<PhraseKey, std::uint64_t, PhraseKeyHash>;

  FrequencyTable() = default;

  void add(const PhraseKey &key, std::uint64_t count = 1);
  void add_tokens(std::uint64_t tokens) { corpus_tokens_ += tokens; }

  std::uint64_t count(const PhraseKey &key) const;
  // Total n-gram occurrences of order n (1..4).
  std::uint64_t total(int n) const;
  std::uint64_t corpus_tokens() const { return corpus_tokens_; }
  const CountMap &counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }

  // Keys sorted by (order, phrase).
  std::vector<PhraseKey> sorted_keys() const;

  // Multiplies every count, total and the token count by `factor`.
  FrequencyTable scaled(std::uint64_t factor) const;

  friend bool operator==(const FrequencyTable &a, const FrequencyTable &b) {
    return a.counts_ == b.counts_ && a.totals_ == b.totals_ &&
           a.corpus_tokens_ == b.corpus_tokens_;
  }

 private:
  CountMap counts_;
  std::array<std::uint64_t, kMaxNgramOrder + 1> totals_{};
  std::uint64_t corpus_tokens_ = 0;
};

// Counts orders 1..max_n over all documents. Documents are split into
// `threads` chunks whose tables are merged in chunk order.
FrequencyTable count_corpus(const Corpus &corpus, int max_n,
                            unsigned threads = 1);

// Pointwise sum; commutative and associative.
FrequencyTable merge(const FrequencyTable &a, const FrequencyTable &b);

// counts[phrase] / totals[order] * 1e6, or 0 for absent phrases.
double rel_freq(const FrequencyTable &table, const PhraseKey &phrase);

// TSV: "#totals\t<t1>\t<t2>\t<t3>\t<t4>\t<corpus_tokens>" header followed by
// "tokens\tn\tcount" rows sorted by (n, phrase).
void write_frequency_table(const FrequencyTable &table,
                           const std::string &path);
std::string format_frequency_table(const FrequencyTable &table);
FrequencyTable read_frequency_table(const std::string &path);

// Word-count lists ("word\tcount", optional '#' comment lines) used as
// external unigram frequency sources.
class UnigramList {
 public:
  UnigramList() = default;
  static UnigramList load(const std::string &path);
  static UnigramList from_table(const FrequencyTable &table);

  void add(const std::string &word, std::uint64_t count);
  std::uint64_t count(const std::string &word) const;
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return counts_.size(); }
  // count / total * 1e6; 0 for unknown words or an empty list.
  double per_million(const std::string &word) const;

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

}  // namespace acadaid

#endif  // ACADAID_NGRAM_H_
