#include "acadaid/embedrank.h"

#include <algorithm>
#include <span>
#include <unordered_set>

#include "acadaid/error.h"

namespace acadaid {

std::vector<CandidatePhrase> extract_candidates(const TaggedDocument &doc,
                                                std::size_t max_len) {
  if (doc.tags.size() != doc.tokens.size()) {
    throw ArgumentError("document '" + doc.id + "' has " +
                        std::to_string(doc.tokens.size()) + " tokens but " +
                        std::to_string(doc.tags.size()) + " tags");
  }
  if (max_len == 0) throw ArgumentError("max_len must be >= 1");
  std::vector<CandidatePhrase> out;
  const auto &tags = doc.tags;
  std::size_t i = 0;
  while (i < tags.size()) {
    std::size_t j = i;
    while (j < tags.size() && tags[j] == PosTag::kAdj) ++j;
    std::size_t noun_start = j;
    while (j < tags.size() && tags[j] == PosTag::kNoun) ++j;
    if (j == noun_start) {
      // No noun after the adjective run: nothing can start inside it either.
      i = std::max(i + 1, noun_start);
      continue;
    }
    std::size_t start = j - i > max_len ? j - max_len : i;
    std::span<const std::string> tokens(doc.tokens.data() + start, j - start);
    out.push_back({PhraseKey(tokens), doc.id, start, j, 0.0});
    i = j;
  }
  return out;
}

bool matches_noun_phrase(const std::vector<PosTag> &tags, std::size_t start,
                         std::size_t end) {
  if (start >= end || end > tags.size()) return false;
  std::size_t i = start;
  while (i < end && tags[i] == PosTag::kAdj) ++i;
  if (i == end) return false;
  while (i < end && tags[i] == PosTag::kNoun) ++i;
  return i == end;
}

std::optional<Vector> embed_phrase(const PhraseKey &phrase,
                                   const EmbeddingTable &table) {
  auto tokens = phrase.tokens();
  return table.mean(tokens);
}

std::vector<CandidatePhrase> rank_candidates(const TaggedDocument &doc,
                                             const EmbeddingTable &table,
                                             int k_per_doc,
                                             std::size_t max_len) {
  if (k_per_doc < 1) throw ArgumentError("k_per_doc must be >= 1");
  auto doc_vec = table.mean(doc.tokens);
  if (!doc_vec) return {};
  std::vector<CandidatePhrase> scored;
  std::unordered_set<PhraseKey, PhraseKeyHash> seen;
  for (auto &cand : extract_candidates(doc, max_len)) {
    if (!seen.insert(cand.phrase).second) continue;
    auto vec = embed_phrase(cand.phrase, table);
    if (!vec) continue;
    cand.similarity = cosine(*vec, *doc_vec);
    scored.push_back(std::move(cand));
  }
  std::sort(scored.begin(), scored.end(), [](const auto &a, const auto &b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.phrase < b.phrase;
  });
  if (scored.size() > static_cast<std::size_t>(k_per_doc)) {
    scored.resize(k_per_doc);
  }
  return scored;
}

}  // namespace acadaid
