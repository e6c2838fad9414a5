#ifndef ACADAID_LEXSUB_H_
#define ACADAID_LEXSUB_H_

#include <array>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "acadaid/ngram.h"
#include "acadaid/pos.h"
#include "acadaid/resource.h"
#include "json.hpp"

namespace acadaid {

struct Substitute {
  std::string word;  // normalized, space-joined for multi-word substitutes
  int weight = 1;    // number of annotators who proposed it

  bool multiword() const { return word.find(' ') != std::string::npos; }
};

// One annotated target in a sentence.
struct LexSubInstance {
  std::string id;                     // sentence id; shared by targets of one sentence
  std::vector<std::string> sentence;  // raw tokens as annotated
  std::size_t target_index = 0;
  std::string target;  // normalized sentence[target_index]
  std::string lemma;   // optional; empty when the record has none
  PosTag pos = PosTag::kOther;
  std::vector<Substitute> substitutes;

  // Lemma when present, otherwise the surface target.
  const std::string &headword() const { return lemma.empty() ? target : lemma; }
};

// Accepts the coarse tag names plus the short forms n, v, a, j, r.
PosTag parse_lexsub_pos(std::string_view name);

// Validates and converts one JSONL record. `record_no` is 1-based.
LexSubInstance lexsub_from_json(const nlohmann::json &record,
                                const std::string &source, std::size_t record_no);
nlohmann::json lexsub_to_json(const LexSubInstance &instance);

// {"id","tokens","target_index","pos","substitutes":[{"word","weight"}]}
// with an optional "lemma". Throws ParseError naming the record.
std::vector<LexSubInstance> load_lexsub(const std::string &path);
std::vector<LexSubInstance> parse_lexsub(const std::string &content,
                                         const std::string &source);

// Compiled resource (academic entries) plus imported reference lists.
class AcademicLexicon {
 public:
  AcademicLexicon() = default;
  explicit AcademicLexicon(const Resource *resource,
                           std::vector<std::set<PhraseKey>> external_lists = {});

  void add_external_list(const std::vector<PhraseKey> &phrases);
  bool is_academic(const PhraseKey &key) const;
  // Normalizes `text` first; false for text that normalizes to nothing or
  // to more than four tokens.
  bool is_academic(std::string_view text) const;

 private:
  const Resource *resource_ = nullptr;
  std::vector<std::set<PhraseKey>> external_;
};

bool is_academic(const PhraseKey &key, const Resource &resource,
                 const std::vector<std::set<PhraseKey>> &external_lists);

enum class IwiLabel { kInformal, kFormal };

std::string_view iwi_label_name(IwiLabel label);
IwiLabel parse_iwi_label(std::string_view name);

struct IWIInstance {
  std::string sentence_id;
  std::vector<std::string> sentence;
  std::size_t token_index = 0;
  IwiLabel label = IwiLabel::kFormal;

  std::string token() const;  // normalized sentence[token_index]
};

// Non-academic targets with an academic substitute are informal; academic
// targets and targets without one are formal. One instance per target.
std::vector<IWIInstance> derive_iwi(const std::vector<LexSubInstance> &instances,
                                    const AcademicLexicon &lexicon);

// "sentence_id\ttoken_index\ttoken\tlabel" with a header row.
std::string format_iwi(const std::vector<IWIInstance> &dataset);
// Rebuilds sentences from the lexsub records the rows were derived from.
std::vector<IWIInstance> load_iwi(const std::string &path,
                                  const std::vector<LexSubInstance> &instances);

struct IwiStats {
  std::size_t informal_tokens = 0;
  std::size_t formal_tokens = 0;
  std::size_t informal_types = 0;
  std::size_t formal_types = 0;

  friend bool operator==(const IwiStats &, const IwiStats &) = default;
};

IwiStats iwi_stats(const std::vector<IWIInstance> &dataset);

struct WordPair {
  std::string informal;
  std::string academic;

  friend auto operator<=>(const WordPair &, const WordPair &) = default;
};

// Pair -> number of supporting instances. A pair needs a non-academic
// target, an academic single-word substitute, and a target whose combined
// (academic + non-academic) unigram count exceeds the substitute's. The
// informal side is the record's lemma when given.
std::map<WordPair, int> derive_pairs(const std::vector<LexSubInstance> &instances,
                                     const AcademicLexicon &lexicon,
                                     const FrequencyTable &acad_table,
                                     const FrequencyTable &nonacad_table);

// "informal\tacademic\tcount": the same layout as a synonym lexicon, so the
// pairs can feed candidate generation directly.
std::string format_pairs(const std::map<WordPair, int> &pairs);

// word -> synonyms ranked by score desc, then lexicographically.
class SynonymLexicon {
 public:
  struct Entry {
    std::string word;
    double score = 0.0;
  };

  SynonymLexicon() = default;
  // "word\tsynonym\tscore"; '#' comments allowed.
  static SynonymLexicon load(const std::string &path);

  void add(const std::string &word, const std::string &synonym, double score);
  const std::vector<Entry> &lookup(const std::string &word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<Entry>> entries_;
};

struct GroupCandidate {
  std::string word;
  bool academic = false;
  int relevance = 0;  // annotator weight; 0 for backfilled words

  friend bool operator==(const GroupCandidate &, const GroupCandidate &) = default;
};

inline constexpr std::size_t kGroupSize = 4;

struct RankingGroup {
  LexSubInstance instance;
  std::array<GroupCandidate, kGroupSize> candidates;  // 2 academic, then 2 not
};

struct GroupBuildResult {
  std::vector<RankingGroup> groups;
  std::size_t dropped = 0;
};

// Two academic and two non-academic single-word candidates per informal
// target: gold substitutes first (weight desc, then lexicographic), then
// the fallback lexicons in order. Targets that cannot be filled are
// dropped and counted.
GroupBuildResult build_groups(const std::vector<LexSubInstance> &instances,
                              const AcademicLexicon &lexicon,
                              const std::vector<const SynonymLexicon *> &fallbacks);

nlohmann::json group_to_json(const RankingGroup &group);
RankingGroup group_from_json(const nlohmann::json &j, const std::string &source,
                             std::size_t record_no);
std::string format_groups(const std::vector<RankingGroup> &groups);
std::vector<RankingGroup> load_groups(const std::string &path);

// Drops academic targets, strips non-academic substitutes, then drops
// targets left without substitutes.
std::vector<LexSubInstance> convert_corpus(const std::vector<LexSubInstance> &instances,
                                           const AcademicLexicon &lexicon);

std::string format_lexsub(const std::vector<LexSubInstance> &instances);

}  // namespace acadaid

#endif  // ACADAID_LEXSUB_H_
