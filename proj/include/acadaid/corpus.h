#ifndef ACADAID_CORPUS_H_
#define ACADAID_CORPUS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace acadaid {

enum class Domain { kAcademic, kNonAcademic };

std::string_view domain_name(Domain domain);

// One unit of text: an article for the academic corpus, a review for the
// non-academic one. Tokens are normalized (see normalize_tokens).
struct Document {
  std::string id;
  std::vector<std::string> tokens;
  Domain source = Domain::kAcademic;
};

// Immutable collection of documents from a single domain.
class Corpus {
 public:
  explicit Corpus(Domain domain) : domain_(domain) {}
  Corpus(Domain domain, std::vector<Document> documents);

  Domain domain() const { return domain_; }
  const std::vector<Document> &documents() const { return documents_; }
  std::uint64_t token_count() const { return token_count_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

 private:
  Domain domain_;
  std::vector<Document> documents_;
  std::uint64_t token_count_ = 0;
};

enum class CorpusFormat { kOneDocPerFile, kOneDocPerLine, kJsonl };

// Parses "one-doc-per-file", "one-doc-per-line" or "jsonl".
CorpusFormat parse_corpus_format(std::string_view name);

// Whitespace split, strip characters outside [A-Za-z0-9'-], lowercase, drop
// tokens that end up empty.
std::vector<std::string> normalize_tokens(std::string_view raw_text);

// Normalizes a single token; returns an empty string if nothing survives.
std::string normalize_token(std::string_view raw);

// Loads a corpus. Document ids are the file name (directory format), the
// 1-based line number (line format) or the record's "id" field (jsonl).
// Blank lines are skipped but do not shift ids. Throws IoError / ParseError;
// invalid UTF-8 is a ParseError.
Corpus load_corpus(const std::string &path, CorpusFormat format,
                   Domain domain, unsigned threads = 1);

// Seeded uniform permutation of the documents, taking whole documents until
// at least `target_tokens` tokens are collected or the corpus is exhausted.
Corpus downsample(const Corpus &corpus, std::uint64_t target_tokens,
                  std::uint64_t seed);

}  // namespace acadaid

#endif  // ACADAID_CORPUS_H_
