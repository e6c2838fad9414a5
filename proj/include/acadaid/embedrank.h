#ifndef ACADAID_EMBEDRANK_H_
#define ACADAID_EMBEDRANK_H_

#include <optional>
#include <string>
#include <vector>

#include "acadaid/embedding.h"
#include "acadaid/ngram.h"
#include "acadaid/pos.h"

namespace acadaid {

// A noun-phrase candidate. span is [start, end) over the document tokens.
struct CandidatePhrase {
  PhraseKey phrase;
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;
  double similarity = 0.0;
};

// Maximal non-overlapping (ADJ)*(NOUN)+ matches, scanning left to right and
// taking the longest match at each start. Matches longer than max_len keep
// their last max_len tokens, so the head noun survives.
std::vector<CandidatePhrase> extract_candidates(const TaggedDocument &doc,
                                                std::size_t max_len = 4);

// True if tags[start, end) is (ADJ)*(NOUN)+.
bool matches_noun_phrase(const std::vector<PosTag> &tags, std::size_t start,
                         std::size_t end);

// Mean of the in-vocabulary token vectors.
std::optional<Vector> embed_phrase(const PhraseKey &phrase,
                                   const EmbeddingTable &table);

// Candidates scored by cosine to the document's mean token vector, best
// first; ties break lexicographically. Repeated phrases are reported once
// (first occurrence). Candidates without an embedding are dropped; a
// document with no known token yields nothing.
std::vector<CandidatePhrase> rank_candidates(const TaggedDocument &doc,
                                             const EmbeddingTable &table,
                                             int k_per_doc,
                                             std::size_t max_len = 4);

}  // namespace acadaid

#endif  // ACADAID_EMBEDRANK_H_
