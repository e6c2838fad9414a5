#include "acadaid/ngram.h"

#include <algorithm>
#include <thread>

#include "acadaid/error.h"
#include "acadaid/text_util.h"

namespace acadaid {

PhraseKey::PhraseKey(std::span<const std::string> tokens)
    : order_(static_cast<int>(tokens.size())) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) text_.push_back(' ');
    text_ += tokens[i];
  }
}

PhraseKey::PhraseKey(std::initializer_list<std::string_view> tokens)
    : order_(static_cast<int>(tokens.size())) {
  bool first = true;
  for (auto token : tokens) {
    if (!first) text_.push_back(' ');
    text_ += token;
    first = false;
  }
}

PhraseKey PhraseKey::parse(std::string_view text) {
  std::vector<std::string> tokens = normalize_tokens(text);
  if (tokens.empty() || tokens.size() > kMaxNgramOrder) {
    throw ArgumentError("phrase must have 1..4 tokens: '" +
                        std::string(text) + "'");
  }
  return PhraseKey(tokens);
}

std::vector<std::string> PhraseKey::tokens() const {
  std::vector<std::string> out;
  if (order_ == 0) return out;
  for (auto piece : split(text_, ' ')) out.emplace_back(piece);
  return out;
}

std::vector<PhraseKey> extract_ngrams(std::span<const std::string> tokens,
                                      int n) {
  if (n < 1 || n > kMaxNgramOrder) {
    throw ArgumentError("n-gram order must be in 1..4, got " +
                        std::to_string(n));
  }
  std::vector<PhraseKey> out;
  if (tokens.size() < static_cast<std::size_t>(n)) return out;
  out.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    out.emplace_back(tokens.subspan(i, n));
  }
  return out;
}

std::vector<PhraseKey> extract_ngrams(const Document &doc, int n) {
  return extract_ngrams(std::span<const std::string>(doc.tokens), n);
}

void FrequencyTable::add(const PhraseKey &key, std::uint64_t count) {
  if (count == 0) return;
  counts_[key] += count;
  totals_[key.order()] += count;
}

std::uint64_t FrequencyTable::count(const PhraseKey &key) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t FrequencyTable::total(int n) const {
  if (n < 1 || n > kMaxNgramOrder) return 0;
  return totals_[n];
}

std::vector<PhraseKey> FrequencyTable::sorted_keys() const {
  std::vector<PhraseKey> keys;
  keys.reserve(counts_.size());
  for (const auto &[key, count] : counts_) keys.push_back(key);
  std::sort(keys.begin(), keys.end(), [](const auto &a, const auto &b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a < b;
  });
  return keys;
}

FrequencyTable FrequencyTable::scaled(std::uint64_t factor) const {
  FrequencyTable out;
  for (const auto &[key, count] : counts_) out.add(key, count * factor);
  out.corpus_tokens_ = corpus_tokens_ * factor;
  return out;
}

static FrequencyTable count_range(const std::vector<Document> &docs,
                                  std::size_t begin, std::size_t end,
                                  int max_n) {
  FrequencyTable table;
  for (std::size_t d = begin; d < end; ++d) {
    const auto &tokens = docs[d].tokens;
    table.add_tokens(tokens.size());
    for (int n = 1; n <= max_n; ++n) {
      for (const auto &key : extract_ngrams(tokens, n)) table.add(key);
    }
  }
  return table;
}

FrequencyTable count_corpus(const Corpus &corpus, int max_n,
                            unsigned threads) {
  if (max_n < 1 || max_n > kMaxNgramOrder) {
    throw ArgumentError("max_n must be in 1..4, got " + std::to_string(max_n));
  }
  const auto &docs = corpus.documents();
  threads = std::max(1u, std::min<unsigned>(threads, docs.size()));
  if (threads <= 1) return count_range(docs, 0, docs.size(), max_n);

  std::vector<FrequencyTable> partial(threads);
  std::vector<std::thread> pool;
  std::size_t chunk = (docs.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t begin = std::min(docs.size(), t * chunk);
    std::size_t end = std::min(docs.size(), begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      partial[t] = count_range(docs, begin, end, max_n);
    });
  }
  for (auto &th : pool) th.join();
  FrequencyTable result;
  for (const auto &part : partial) result = merge(result, part);
  return result;
}

FrequencyTable merge(const FrequencyTable &a, const FrequencyTable &b) {
  FrequencyTable out = a;
  for (const auto &[key, count] : b.counts()) out.add(key, count);
  out.add_tokens(b.corpus_tokens());
  return out;
}

double rel_freq(const FrequencyTable &table, const PhraseKey &phrase) {
  std::uint64_t count = table.count(phrase);
  if (count == 0) return 0.0;
  return static_cast<double>(count) * 1e6 /
         static_cast<double>(table.total(phrase.order()));
}

std::string format_frequency_table(const FrequencyTable &table) {
  std::string out = "#totals";
  for (int n = 1; n <= kMaxNgramOrder; ++n) {
    out += '\t' + std::to_string(table.total(n));
  }
  out += '\t' + std::to_string(table.corpus_tokens()) + '\n';
  for (const auto &key : table.sorted_keys()) {
    out += key.text();
    out += '\t' + std::to_string(key.order()) + '\t' +
           std::to_string(table.count(key)) + '\n';
  }
  return out;
}

void write_frequency_table(const FrequencyTable &table,
                           const std::string &path) {
  write_file(path, format_frequency_table(table));
}

FrequencyTable read_frequency_table(const std::string &path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0].rfind("#totals", 0) != 0) {
    throw ParseError(path, 1, "missing '#totals' header");
  }
  auto header = split(lines[0], '\t');
  if (header.size() != kMaxNgramOrder + 2) {
    throw ParseError(path, 1, "header must list 4 totals and a token count");
  }
  FrequencyTable table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = split(lines[i], '\t');
    if (fields.size() != 3) throw ParseError(path, i + 1, "expected 3 fields");
    std::vector<std::string> tokens;
    for (auto t : split(fields[0], ' ')) tokens.emplace_back(t);
    auto n = parse_int(fields[1], path, i + 1);
    auto count = parse_int(fields[2], path, i + 1);
    if (n != static_cast<std::int64_t>(tokens.size()) || n < 1 ||
        n > kMaxNgramOrder || count < 0) {
      throw ParseError(path, i + 1, "inconsistent n-gram row");
    }
    table.add(PhraseKey(tokens), static_cast<std::uint64_t>(count));
  }
  for (int n = 1; n <= kMaxNgramOrder; ++n) {
    auto expected = parse_int(header[n], path, 1);
    if (static_cast<std::uint64_t>(expected) != table.total(n)) {
      throw ParseError(path, 1,
                       "total for order " + std::to_string(n) +
                           " does not match the rows");
    }
  }
  table.add_tokens(
      static_cast<std::uint64_t>(parse_int(header[kMaxNgramOrder + 1], path, 1)));
  return table;
}

UnigramList UnigramList::load(const std::string &path) {
  UnigramList list;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto &line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2) throw ParseError(path, i + 1, "expected word\\tcount");
    auto count = parse_int(fields[1], path, i + 1);
    if (count < 0) throw ParseError(path, i + 1, "negative count");
    std::string word = normalize_token(fields[0]);
    if (word.empty()) continue;
    list.add(word, static_cast<std::uint64_t>(count));
  }
  return list;
}

UnigramList UnigramList::from_table(const FrequencyTable &table) {
  UnigramList list;
  for (const auto &[key, count] : table.counts()) {
    if (key.order() == 1) list.add(key.text(), count);
  }
  return list;
}

void UnigramList::add(const std::string &word, std::uint64_t count) {
  counts_[word] += count;
  total_ += count;
}

std::uint64_t UnigramList::count(const std::string &word) const {
  auto it = counts_.find(word);
  return it == counts_.end() ? 0 : it->second;
}

double UnigramList::per_million(const std::string &word) const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(count(word)) * 1e6 / static_cast<double>(total_);
}

}  // namespace acadaid
