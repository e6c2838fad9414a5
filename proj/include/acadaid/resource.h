#ifndef ACADAID_RESOURCE_H_
#define ACADAID_RESOURCE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acadaid/corpus.h"
#include "acadaid/embedding.h"
#include "acadaid/ngram.h"
#include "acadaid/pos.h"
#include "acadaid/tfidf.h"

namespace acadaid {

enum class Source : unsigned { kTfidf = 1, kEmbedRank = 2, kExternal = 4 };

// Bit set of Source values.
class SourceSet {
 public:
  SourceSet() = default;
  SourceSet(std::initializer_list<Source> sources);

  void insert(Source s) { bits_ |= static_cast<unsigned>(s); }
  bool contains(Source s) const { return bits_ & static_cast<unsigned>(s); }
  bool empty() const { return bits_ == 0; }
  unsigned bits() const { return bits_; }

  // "tfidf,embedrank,external" subset in that order; "" when empty.
  std::string to_string() const;
  static SourceSet parse(std::string_view text);

  friend bool operator==(SourceSet a, SourceSet b) { return a.bits_ == b.bits_; }

 private:
  unsigned bits_ = 0;
};

enum class ResourceLabel { kAcademic, kNonAcademic };

std::string_view label_name(ResourceLabel label);

struct ResourceEntry {
  PhraseKey phrase;
  double acad_rate = 0.0;     // per million n-grams of the same order
  double nonacad_rate = 0.0;  // per million n-grams of the same order
  double ratio = 0.0;         // +inf when the contrast rate is 0
  SourceSet sources;
  ResourceLabel label = ResourceLabel::kAcademic;

  int n() const { return phrase.order(); }

  friend bool operator==(const ResourceEntry &, const ResourceEntry &) = default;
};

struct RatioFilterOptions {
  double threshold = 1.5;
  std::uint64_t min_count = 5;
};

// Phrase-keyed set of entries plus build metadata.
class Resource {
 public:
  Resource() = default;
  explicit Resource(double threshold);

  double threshold() const { return threshold_; }
  void set_threshold(double t);

  // Replaces an existing entry with the same phrase.
  void insert(ResourceEntry entry);
  const ResourceEntry *find(const PhraseKey &phrase) const;
  bool contains(const PhraseKey &phrase) const { return find(phrase) != nullptr; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Entries sorted by (n, phrase).
  std::vector<const ResourceEntry *> sorted() const;

  std::map<std::string, std::string> &metadata() { return metadata_; }
  const std::map<std::string, std::string> &metadata() const { return metadata_; }

  friend bool operator==(const Resource &a, const Resource &b) {
    return a.threshold_ == b.threshold_ && a.entries_ == b.entries_ &&
           a.metadata_ == b.metadata_;
  }

 private:
  double threshold_ = 1.5;
  std::map<PhraseKey, ResourceEntry> entries_;
  std::map<std::string, std::string> metadata_;
};

// Keeps candidate p iff count(p) in `target` >= min_count and either p is
// absent from `contrast` or rate_target / rate_contrast >= threshold. The
// boundary is inclusive. Rates are per-order per-million; the ratio is
// computed from the exact integer cross products so that a true ratio of
// exactly `threshold` is never lost to rounding.
std::vector<ResourceEntry> ratio_filter(
    const std::vector<PhraseKey> &candidates, const FrequencyTable &target,
    const FrequencyTable &contrast, const RatioFilterOptions &options,
    ResourceLabel label = ResourceLabel::kAcademic);

struct BuildConfig {
  KeyphraseOptions tfidf;          // k_per_doc, stopword mode, max_n
  StopwordSet stopwords;
  int embedrank_k_per_doc = 10;
  std::size_t embedrank_max_len = 4;
  RatioFilterOptions filter;
  unsigned threads = 1;
};

// Per (source x order) counts, before and after the ratio filter.
struct BuildReport {
  // [source][n], source 0 = tfidf, 1 = embedrank, 2 = union.
  std::array<std::array<std::uint64_t, kMaxNgramOrder + 1>, 3> candidates{};
  std::array<std::array<std::uint64_t, kMaxNgramOrder + 1>, 3> kept{};

  std::string to_tsv() const;
};

struct BuildResult {
  Resource resource;
  BuildReport report;
  FrequencyTable target_counts;
  FrequencyTable contrast_counts;
};

// Tags each target document with `tagger` unless `tagged` supplies the
// pre-tagged documents (aligned by position). Runs both extractors on the
// target corpus, unions their candidates and applies the ratio filter.
BuildResult build_resource(const Corpus &acad, const Corpus &nonacad,
                           const BuildConfig &config,
                           const EmbeddingTable &embeddings,
                           const LexiconTagger &tagger,
                           const std::vector<TaggedDocument> *tagged = nullptr);

// Same procedure with the corpora roles swapped; entries are labelled
// non-academic and rates keep their academic/non-academic meaning.
BuildResult build_nonacademic(const Corpus &acad, const Corpus &nonacad,
                              const BuildConfig &config,
                              const EmbeddingTable &embeddings,
                              const LexiconTagger &tagger,
                              const std::vector<TaggedDocument> *tagged = nullptr);

// Percentage of listed phrases that occur at least once in the table.
// Throws ArgumentError for an empty list.
double coverage(const std::vector<PhraseKey> &reference_list,
                const FrequencyTable &corpus_table);

// One phrase per line, normalized; blank lines and '#' comments skipped.
// Phrases longer than four tokens are skipped.
std::vector<PhraseKey> load_phrase_list(const std::string &path);

// TSV: header "tokens\tn\tacad_rate\tnonacad_rate\tratio\tsources\tlabel",
// rows sorted by (n, phrase). Metadata and threshold go in leading
// "#key\tvalue" comment lines.
std::string format_resource(const Resource &resource);
void write_resource(const Resource &resource, const std::string &path);
Resource parse_resource(const std::string &content, const std::string &source);
Resource read_resource(const std::string &path);

}  // namespace acadaid

#endif  // ACADAID_RESOURCE_H_
