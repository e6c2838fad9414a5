#ifndef ACADAID_POS_H_
#define ACADAID_POS_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "acadaid/corpus.h"

namespace acadaid {

// Coarse universal tag set. The enumerator order fixes the one-hot layout
// used by the classifier features.
enum class PosTag {
  kAdj,
  kNoun,
  kVerb,
  kAdv,
  kDet,
  kPron,
  kAdp,
  kNum,
  kConj,
  kPart,
  kPunct,
  kOther,
};

inline constexpr std::size_t kNumPosTags = 12;

std::string_view pos_name(PosTag tag);
// Accepts the canonical upper-case names; nullopt otherwise.
std::optional<PosTag> parse_pos(std::string_view name);

struct TaggedDocument {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<PosTag> tags;  // same length as tokens
};

// Pre-tagged corpus: one document per line, "token_TAG" items separated by
// spaces. The tag is taken after the last underscore; tokens are
// normalized and items whose token normalizes to nothing are dropped.
std::vector<TaggedDocument> load_tagged_corpus(const std::string &path);
TaggedDocument parse_tagged_line(std::string_view line, std::string id,
                                 const std::string &source = "<input>",
                                 std::size_t line_no = 1);

// Most-frequent-tag lexicon with suffix heuristics; unknown words fall back
// to NOUN.
class LexiconTagger {
 public:
  LexiconTagger() = default;

  // "word\tTAG" per line; '#' comments allowed.
  static LexiconTagger load(const std::string &path);

  void add(const std::string &word, PosTag tag);
  std::size_t size() const { return lexicon_.size(); }

  PosTag tag_word(const std::string &word) const;
  std::vector<PosTag> tag(const std::vector<std::string> &tokens) const;
  TaggedDocument tag(const Document &doc) const;

 private:
  std::unordered_map<std::string, PosTag> lexicon_;
};

}  // namespace acadaid

#endif  // ACADAID_POS_H_
