#include "acadaid/pos.h"

#include "acadaid/error.h"
#include "acadaid/text_util.h"

namespace acadaid {

namespace {

constexpr std::array<std::string_view, kNumPosTags> kPosNames = {
    "ADJ", "NOUN", "VERB", "ADV",  "DET",   "PRON",
    "ADP", "NUM",  "CONJ", "PART", "PUNCT", "OTHER"};

bool ends_with(std::string_view word, std::string_view suffix) {
  return word.size() > suffix.size() + 1 &&
         word.substr(word.size() - suffix.size()) == suffix;
}

bool is_number(std::string_view word) {
  bool digit = false;
  for (char c : word) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '-' && c != '\'') {
      return false;
    }
  }
  return digit;
}

}  // namespace

std::string_view pos_name(PosTag tag) {
  return kPosNames[static_cast<std::size_t>(tag)];
}

std::optional<PosTag> parse_pos(std::string_view name) {
  for (std::size_t i = 0; i < kNumPosTags; ++i) {
    if (kPosNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

TaggedDocument parse_tagged_line(std::string_view line, std::string id,
                                 const std::string &source,
                                 std::size_t line_no) {
  TaggedDocument doc;
  doc.id = std::move(id);
  for (auto item : split_whitespace(line)) {
    std::size_t us = item.rfind('_');
    if (us == std::string_view::npos || us == 0) {
      throw ParseError(source, line_no,
                       "expected token_TAG, got '" + std::string(item) + "'");
    }
    auto tag = parse_pos(item.substr(us + 1));
    if (!tag) {
      throw ParseError(source, line_no,
                       "unknown tag in '" + std::string(item) + "'");
    }
    // Tokens that normalize to nothing (punctuation) stay in place so that
    // no phrase can span them.
    std::string token = normalize_token(item.substr(0, us));
    if (token.empty()) token = std::string(item.substr(0, us));
    doc.tokens.push_back(std::move(token));
    doc.tags.push_back(*tag);
  }
  return doc;
}

std::vector<TaggedDocument> load_tagged_corpus(const std::string &path) {
  std::vector<TaggedDocument> docs;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (split_whitespace(lines[i]).empty()) continue;
    if (!is_valid_utf8(lines[i])) throw ParseError(path, i + 1, "invalid UTF-8");
    docs.push_back(parse_tagged_line(lines[i], std::to_string(i + 1), path, i + 1));
  }
  return docs;
}

LexiconTagger LexiconTagger::load(const std::string &path) {
  LexiconTagger tagger;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto &line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2) throw ParseError(path, i + 1, "expected word\\tTAG");
    auto tag = parse_pos(fields[1]);
    if (!tag) throw ParseError(path, i + 1, "unknown tag '" + std::string(fields[1]) + "'");
    std::string word = normalize_token(fields[0]);
    if (!word.empty()) tagger.add(word, *tag);
  }
  return tagger;
}

void LexiconTagger::add(const std::string &word, PosTag tag) {
  lexicon_[word] = tag;
}

PosTag LexiconTagger::tag_word(const std::string &word) const {
  auto it = lexicon_.find(word);
  if (it != lexicon_.end()) return it->second;
  if (is_number(word)) return PosTag::kNum;
  if (ends_with(word, "ly")) return PosTag::kAdv;
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "less",
                             "ical", "al", "ic", "ary", "ish"}) {
    if (ends_with(word, s)) return PosTag::kAdj;
  }
  for (std::string_view s : {"tion", "sion", "ment", "ness", "ity", "ism",
                             "ance", "ence", "ship", "er", "or"}) {
    if (ends_with(word, s)) return PosTag::kNoun;
  }
  for (std::string_view s : {"ing", "ed", "ize", "ise", "ify"}) {
    if (ends_with(word, s)) return PosTag::kVerb;
  }
  return PosTag::kNoun;
}

std::vector<PosTag> LexiconTagger::tag(
    const std::vector<std::string> &tokens) const {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const auto &t : tokens) tags.push_back(tag_word(t));
  return tags;
}

TaggedDocument LexiconTagger::tag(const Document &doc) const {
  return TaggedDocument{doc.id, doc.tokens, tag(doc.tokens)};
}

}  // namespace acadaid
