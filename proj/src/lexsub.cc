#include "acadaid/lexsub.h"

#include <algorithm>
#include <unordered_set>

#include "acadaid/corpus.h"
#include "acadaid/error.h"
#include "acadaid/text_util.h"

namespace acadaid {

using nlohmann::json;

PosTag parse_lexsub_pos(std::string_view name) {
  if (auto tag = parse_pos(name)) return *tag;
  if (name == "n" || name == "N") return PosTag::kNoun;
  if (name == "v" || name == "V") return PosTag::kVerb;
  if (name == "a" || name == "j" || name == "A" || name == "J") return PosTag::kAdj;
  if (name == "r" || name == "R") return PosTag::kAdv;
  return PosTag::kOther;
}

LexSubInstance lexsub_from_json(const json &record, const std::string &source,
                                std::size_t record_no) {
  auto fail = [&](const std::string &what) -> ParseError {
    return ParseError(source, record_no, what);
  };
  if (!record.is_object()) throw fail("record is not a JSON object");
  for (const char *field : {"id", "tokens", "target_index", "pos", "substitutes"}) {
    if (!record.contains(field)) throw fail(std::string("missing field \"") + field + "\"");
  }
  LexSubInstance inst;
  if (!record["id"].is_string()) throw fail("\"id\" must be a string");
  inst.id = record["id"].get<std::string>();
  if (!record["tokens"].is_array()) throw fail("\"tokens\" must be an array");
  for (const auto &t : record["tokens"]) {
    if (!t.is_string()) throw fail("\"tokens\" must contain strings");
    inst.sentence.push_back(t.get<std::string>());
  }
  if (!record["target_index"].is_number_integer()) {
    throw fail("\"target_index\" must be an integer");
  }
  auto index = record["target_index"].get<std::int64_t>();
  if (index < 0 || static_cast<std::size_t>(index) >= inst.sentence.size()) {
    throw fail("target_index " + std::to_string(index) + " out of range for " +
               std::to_string(inst.sentence.size()) + " tokens");
  }
  inst.target_index = static_cast<std::size_t>(index);
  inst.target = normalize_token(inst.sentence[inst.target_index]);
  if (inst.target.empty()) throw fail("target token normalizes to nothing");
  if (!record["pos"].is_string()) throw fail("\"pos\" must be a string");
  inst.pos = parse_lexsub_pos(record["pos"].get<std::string>());
  if (record.contains("lemma")) {
    if (!record["lemma"].is_string()) throw fail("\"lemma\" must be a string");
    inst.lemma = normalize_token(record["lemma"].get<std::string>());
  }
  if (!record["substitutes"].is_array()) throw fail("\"substitutes\" must be an array");
  for (const auto &s : record["substitutes"]) {
    if (!s.is_object() || !s.contains("word") || !s.contains("weight") ||
        !s["word"].is_string() || !s["weight"].is_number_integer()) {
      throw fail("substitute needs string \"word\" and integer \"weight\"");
    }
    Substitute sub;
    sub.word = join(normalize_tokens(s["word"].get<std::string>()), " ");
    auto weight = s["weight"].get<std::int64_t>();
    if (weight < 1) throw fail("substitute weight must be >= 1");
    if (sub.word.empty()) continue;
    sub.weight = static_cast<int>(weight);
    inst.substitutes.push_back(std::move(sub));
  }
  return inst;
}

json lexsub_to_json(const LexSubInstance &instance) {
  json j;
  j["id"] = instance.id;
  j["tokens"] = instance.sentence;
  j["target_index"] = instance.target_index;
  j["pos"] = std::string(pos_name(instance.pos));
  if (!instance.lemma.empty()) j["lemma"] = instance.lemma;
  j["substitutes"] = json::array();
  for (const auto &s : instance.substitutes) {
    j["substitutes"].push_back({{"word", s.word}, {"weight", s.weight}});
  }
  return j;
}

std::vector<LexSubInstance> parse_lexsub(const std::string &content,
                                         const std::string &source) {
  std::vector<LexSubInstance> out;
  std::size_t line_no = 0;
  for (auto line : split(content, '\n')) {
    ++line_no;
    if (split_whitespace(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    out.push_back(lexsub_from_json(record, source, line_no));
  }
  return out;
}

std::vector<LexSubInstance> load_lexsub(const std::string &path) {
  return parse_lexsub(read_file(path), path);
}

std::string format_lexsub(const std::vector<LexSubInstance> &instances) {
  std::string out;
  for (const auto &inst : instances) out += lexsub_to_json(inst).dump() + '\n';
  return out;
}

AcademicLexicon::AcademicLexicon(const Resource *resource,
                                 std::vector<std::set<PhraseKey>> external_lists)
    : resource_(resource), external_(std::move(external_lists)) {}

void AcademicLexicon::add_external_list(const std::vector<PhraseKey> &phrases) {
  external_.emplace_back(phrases.begin(), phrases.end());
}

bool AcademicLexicon::is_academic(const PhraseKey &key) const {
  if (resource_) {
    const ResourceEntry *entry = resource_->find(key);
    if (entry && entry->label == ResourceLabel::kAcademic) return true;
  }
  for (const auto &list : external_) {
    if (list.count(key)) return true;
  }
  return false;
}

bool AcademicLexicon::is_academic(std::string_view text) const {
  auto tokens = normalize_tokens(text);
  if (tokens.empty() || tokens.size() > kMaxNgramOrder) return false;
  return is_academic(PhraseKey(tokens));
}

bool is_academic(const PhraseKey &key, const Resource &resource,
                 const std::vector<std::set<PhraseKey>> &external_lists) {
  return AcademicLexicon(&resource, external_lists).is_academic(key);
}

std::string_view iwi_label_name(IwiLabel label) {
  return label == IwiLabel::kInformal ? "informal" : "formal";
}

IwiLabel parse_iwi_label(std::string_view name) {
  if (name == "informal" || name == "I") return IwiLabel::kInformal;
  if (name == "formal" || name == "F") return IwiLabel::kFormal;
  throw ArgumentError("unknown IWI label '" + std::string(name) + "'");
}

std::string IWIInstance::token() const {
  return normalize_token(sentence.at(token_index));
}

static bool has_academic_substitute(const LexSubInstance &inst,
                                    const AcademicLexicon &lexicon) {
  return std::any_of(inst.substitutes.begin(), inst.substitutes.end(),
                     [&](const Substitute &s) { return lexicon.is_academic(s.word); });
}

static bool is_informal(const LexSubInstance &inst, const AcademicLexicon &lexicon) {
  return !lexicon.is_academic(inst.target) && has_academic_substitute(inst, lexicon);
}

std::vector<IWIInstance> derive_iwi(const std::vector<LexSubInstance> &instances,
                                    const AcademicLexicon &lexicon) {
  std::vector<IWIInstance> out;
  out.reserve(instances.size());
  for (const auto &inst : instances) {
    out.push_back({inst.id, inst.sentence, inst.target_index,
                   is_informal(inst, lexicon) ? IwiLabel::kInformal
                                              : IwiLabel::kFormal});
  }
  return out;
}

std::string format_iwi(const std::vector<IWIInstance> &dataset) {
  std::string out = "sentence_id\ttoken_index\ttoken\tlabel\n";
  for (const auto &x : dataset) {
    out += x.sentence_id + '\t' + std::to_string(x.token_index) + '\t' + x.token() +
           '\t' + std::string(iwi_label_name(x.label)) + '\n';
  }
  return out;
}

std::vector<IWIInstance> load_iwi(const std::string &path,
                                  const std::vector<LexSubInstance> &instances) {
  std::unordered_map<std::string, const LexSubInstance *> by_id;
  for (const auto &inst : instances) by_id.emplace(inst.id, &inst);
  std::vector<IWIInstance> out;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto &line = lines[i];
    if (line.empty() || (i == 0 && line.rfind("sentence_id\t", 0) == 0)) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) throw ParseError(path, i + 1, "expected 4 fields");
    auto it = by_id.find(std::string(fields[0]));
    if (it == by_id.end()) {
      throw ParseError(path, i + 1, "unknown sentence id '" + std::string(fields[0]) + "'");
    }
    IWIInstance x;
    x.sentence_id = it->first;
    x.sentence = it->second->sentence;
    auto index = parse_int(fields[1], path, i + 1);
    if (index < 0 || static_cast<std::size_t>(index) >= x.sentence.size()) {
      throw ParseError(path, i + 1, "token index out of range");
    }
    x.token_index = static_cast<std::size_t>(index);
    if (x.token() != fields[2]) {
      throw ParseError(path, i + 1, "token does not match the sentence");
    }
    try {
      x.label = parse_iwi_label(fields[3]);
    } catch (const ArgumentError &e) {
      throw ParseError(path, i + 1, e.what());
    }
    out.push_back(std::move(x));
  }
  return out;
}

IwiStats iwi_stats(const std::vector<IWIInstance> &dataset) {
  IwiStats stats;
  std::unordered_set<std::string> informal, formal;
  for (const auto &x : dataset) {
    if (x.label == IwiLabel::kInformal) {
      ++stats.informal_tokens;
      informal.insert(x.token());
    } else {
      ++stats.formal_tokens;
      formal.insert(x.token());
    }
  }
  stats.informal_types = informal.size();
  stats.formal_types = formal.size();
  return stats;
}

std::map<WordPair, int> derive_pairs(const std::vector<LexSubInstance> &instances,
                                     const AcademicLexicon &lexicon,
                                     const FrequencyTable &acad_table,
                                     const FrequencyTable &nonacad_table) {
  auto combined = [&](const std::string &word) {
    PhraseKey key({std::string_view(word)});
    return acad_table.count(key) + nonacad_table.count(key);
  };
  std::map<WordPair, int> pairs;
  for (const auto &inst : instances) {
    if (lexicon.is_academic(inst.target)) continue;
    const std::uint64_t target_freq = combined(inst.target);
    for (const auto &sub : inst.substitutes) {
      if (sub.multiword() || sub.word == inst.target) continue;
      if (!lexicon.is_academic(sub.word)) continue;
      if (target_freq <= combined(sub.word)) continue;
      ++pairs[WordPair{inst.headword(), sub.word}];
    }
  }
  return pairs;
}

std::string format_pairs(const std::map<WordPair, int> &pairs) {
  std::string out;
  for (const auto &[pair, count] : pairs) {
    out += pair.informal + '\t' + pair.academic + '\t' + std::to_string(count) + '\n';
  }
  return out;
}

SynonymLexicon SynonymLexicon::load(const std::string &path) {
  SynonymLexicon lex;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto &line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) throw ParseError(path, i + 1, "expected word\\tsynonym\\tscore");
    double score = parse_double(fields[2], path, i + 1);
    std::string word = join(normalize_tokens(fields[0]), " ");
    std::string syn = join(normalize_tokens(fields[1]), " ");
    if (word.empty() || syn.empty()) continue;
    lex.add(word, syn, score);
  }
  return lex;
}

void SynonymLexicon::add(const std::string &word, const std::string &synonym,
                         double score) {
  auto &list = entries_[word];
  auto it = std::find_if(list.begin(), list.end(),
                         [&](const Entry &e) { return e.word == synonym; });
  if (it != list.end()) {
    it->score = std::max(it->score, score);
  } else {
    list.push_back({synonym, score});
  }
  std::sort(list.begin(), list.end(), [](const Entry &a, const Entry &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
  });
}

const std::vector<SynonymLexicon::Entry> &SynonymLexicon::lookup(
    const std::string &word) const {
  static const std::vector<Entry> kEmpty;
  auto it = entries_.find(word);
  return it == entries_.end() ? kEmpty : it->second;
}

GroupBuildResult build_groups(const std::vector<LexSubInstance> &instances,
                              const AcademicLexicon &lexicon,
                              const std::vector<const SynonymLexicon *> &fallbacks) {
  GroupBuildResult result;
  for (const auto &inst : instances) {
    if (!is_informal(inst, lexicon)) continue;

    std::vector<Substitute> gold;
    for (const auto &s : inst.substitutes) {
      if (!s.multiword() && s.word != inst.target) gold.push_back(s);
    }
    std::stable_sort(gold.begin(), gold.end(), [](const auto &a, const auto &b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return a.word < b.word;
    });

    std::vector<GroupCandidate> academic, other;
    std::unordered_set<std::string> used = {inst.target};
    auto offer = [&](const std::string &word, int relevance) {
      if (used.count(word)) return;
      bool acad = lexicon.is_academic(word);
      auto &bucket = acad ? academic : other;
      if (bucket.size() >= 2) return;
      bucket.push_back({word, acad, relevance});
      used.insert(word);
    };
    for (const auto &s : gold) offer(s.word, s.weight);

    std::vector<std::string> keys = {inst.target};
    if (!inst.lemma.empty() && inst.lemma != inst.target) keys.push_back(inst.lemma);
    for (const auto *lex : fallbacks) {
      if (academic.size() >= 2 && other.size() >= 2) break;
      for (const auto &key : keys) {
        for (const auto &entry : lex->lookup(key)) {
          if (entry.word.find(' ') != std::string::npos) continue;
          offer(entry.word, 0);
        }
      }
    }

    if (academic.size() < 2 || other.size() < 2) {
      ++result.dropped;
      continue;
    }
    RankingGroup group;
    group.instance = inst;
    group.candidates = {academic[0], academic[1], other[0], other[1]};
    result.groups.push_back(std::move(group));
  }
  return result;
}

json group_to_json(const RankingGroup &group) {
  json j;
  j["instance"] = lexsub_to_json(group.instance);
  j["candidates"] = json::array();
  for (const auto &c : group.candidates) {
    j["candidates"].push_back(
        {{"word", c.word}, {"academic", c.academic}, {"relevance", c.relevance}});
  }
  return j;
}

RankingGroup group_from_json(const json &j, const std::string &source,
                             std::size_t record_no) {
  if (!j.is_object() || !j.contains("instance") || !j.contains("candidates")) {
    throw ParseError(source, record_no, "group needs \"instance\" and \"candidates\"");
  }
  RankingGroup group;
  group.instance = lexsub_from_json(j["instance"], source, record_no);
  const auto &cands = j["candidates"];
  if (!cands.is_array() || cands.size() != kGroupSize) {
    throw ParseError(source, record_no, "group must have exactly 4 candidates");
  }
  for (std::size_t i = 0; i < kGroupSize; ++i) {
    const auto &c = cands[i];
    if (!c.is_object() || !c.contains("word") || !c["word"].is_string() ||
        !c.contains("academic") || !c["academic"].is_boolean() ||
        !c.contains("relevance") || !c["relevance"].is_number_integer()) {
      throw ParseError(source, record_no,
                       "candidate needs \"word\", \"academic\" and \"relevance\"");
    }
    int relevance = c["relevance"].get<int>();
    if (relevance < 0) throw ParseError(source, record_no, "negative relevance");
    group.candidates[i] = {normalize_token(c["word"].get<std::string>()),
                           c["academic"].get<bool>(), relevance};
  }
  return group;
}

std::string format_groups(const std::vector<RankingGroup> &groups) {
  std::string out;
  for (const auto &g : groups) out += group_to_json(g).dump() + '\n';
  return out;
}

std::vector<RankingGroup> load_groups(const std::string &path) {
  std::vector<RankingGroup> out;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (split_whitespace(lines[i]).empty()) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error &e) {
      throw ParseError(path, i + 1, std::string("malformed JSON: ") + e.what());
    }
    out.push_back(group_from_json(j, path, i + 1));
  }
  return out;
}

std::vector<LexSubInstance> convert_corpus(const std::vector<LexSubInstance> &instances,
                                           const AcademicLexicon &lexicon) {
  std::vector<LexSubInstance> out;
  for (const auto &inst : instances) {
    if (lexicon.is_academic(inst.target)) continue;
    LexSubInstance copy = inst;
    std::erase_if(copy.substitutes,
                  [&](const Substitute &s) { return !lexicon.is_academic(s.word); });
    if (copy.substitutes.empty()) continue;
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace acadaid
