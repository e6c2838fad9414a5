#include "acadaid/resource.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acadaid/embedrank.h"
#include "acadaid/error.h"
#include "acadaid/parallel.h"
#include "acadaid/text_util.h"

namespace acadaid {

namespace {

constexpr std::string_view kResourceHeader =
    "tokens\tn\tacad_rate\tnonacad_rate\tratio\tsources\tlabel";

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SourceSet::SourceSet(std::initializer_list<Source> sources) {
  for (auto s : sources) insert(s);
}

std::string SourceSet::to_string() const {
  std::vector<std::string> names;
  if (contains(Source::kTfidf)) names.push_back("tfidf");
  if (contains(Source::kEmbedRank)) names.push_back("embedrank");
  if (contains(Source::kExternal)) names.push_back("external");
  return join(names, ",");
}

SourceSet SourceSet::parse(std::string_view text) {
  SourceSet set;
  if (text.empty()) return set;
  for (auto name : split(text, ',')) {
    if (name == "tfidf") {
      set.insert(Source::kTfidf);
    } else if (name == "embedrank") {
      set.insert(Source::kEmbedRank);
    } else if (name == "external") {
      set.insert(Source::kExternal);
    } else {
      throw ArgumentError("unknown source '" + std::string(name) + "'");
    }
  }
  return set;
}

std::string_view label_name(ResourceLabel label) {
  return label == ResourceLabel::kAcademic ? "academic" : "nonacademic";
}

Resource::Resource(double threshold) { set_threshold(threshold); }

void Resource::set_threshold(double t) {
  if (!(t > 0)) throw ArgumentError("threshold must be positive");
  threshold_ = t;
}

void Resource::insert(ResourceEntry entry) {
  PhraseKey key = entry.phrase;
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

const ResourceEntry *Resource::find(const PhraseKey &phrase) const {
  auto it = entries_.find(phrase);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<const ResourceEntry *> Resource::sorted() const {
  std::vector<const ResourceEntry *> out;
  out.reserve(entries_.size());
  for (const auto &[key, entry] : entries_) out.push_back(&entry);
  std::stable_sort(out.begin(), out.end(), [](const auto *a, const auto *b) {
    return a->n() < b->n();
  });
  return out;
}

std::vector<ResourceEntry> ratio_filter(
    const std::vector<PhraseKey> &candidates, const FrequencyTable &target,
    const FrequencyTable &contrast, const RatioFilterOptions &options,
    ResourceLabel label) {
  if (!(options.threshold > 0)) throw ArgumentError("threshold must be positive");
  std::vector<ResourceEntry> kept;
  for (const auto &phrase : candidates) {
    const std::uint64_t a = target.count(phrase);
    if (a < options.min_count || a == 0) continue;
    const std::uint64_t b = contrast.count(phrase);
    const int n = phrase.order();
    double ratio = kInf;
    if (b > 0) {
      // a/Ta : b/Tb == a*Tb : b*Ta, both products exact in 128 bits.
      unsigned __int128 num = static_cast<unsigned __int128>(a) * contrast.total(n);
      unsigned __int128 den = static_cast<unsigned __int128>(b) * target.total(n);
      long double r = static_cast<long double>(num) / static_cast<long double>(den);
      if (r < static_cast<long double>(options.threshold)) continue;
      ratio = static_cast<double>(r);
    }
    ResourceEntry entry;
    entry.phrase = phrase;
    double target_rate = rel_freq(target, phrase);
    double contrast_rate = rel_freq(contrast, phrase);
    if (label == ResourceLabel::kAcademic) {
      entry.acad_rate = target_rate;
      entry.nonacad_rate = contrast_rate;
    } else {
      entry.acad_rate = contrast_rate;
      entry.nonacad_rate = target_rate;
    }
    entry.ratio = ratio;
    entry.label = label;
    kept.push_back(std::move(entry));
  }
  return kept;
}

std::string BuildReport::to_tsv() const {
  static constexpr std::array<std::string_view, 3> kNames = {"tfidf", "embedrank",
                                                             "union"};
  std::string out = "stage\tsource\tuni\tbi\ttri\tquad\n";
  auto rows = [&](std::string_view stage, const auto &table) {
    for (std::size_t s = 0; s < kNames.size(); ++s) {
      out += std::string(stage) + '\t' + std::string(kNames[s]);
      for (int n = 1; n <= kMaxNgramOrder; ++n) {
        out += '\t' + std::to_string(table[s][n]);
      }
      out += '\n';
    }
  };
  rows("candidates", candidates);
  rows("kept", kept);
  return out;
}

namespace {

BuildResult build_contrastive(const Corpus &target, const Corpus &contrast,
                              const BuildConfig &config,
                              const EmbeddingTable &embeddings,
                              const LexiconTagger &tagger,
                              const std::vector<TaggedDocument> *tagged,
                              ResourceLabel label) {
  if (target.empty() || contrast.empty()) {
    throw ArgumentError("both corpora must be non-empty");
  }
  if (tagged && tagged->size() != target.size()) {
    throw ArgumentError("pre-tagged corpus has " + std::to_string(tagged->size()) +
                        " documents, expected " + std::to_string(target.size()));
  }
  const int max_n = config.tfidf.max_n;
  BuildResult result;
  result.target_counts = count_corpus(target, max_n, config.threads);
  result.contrast_counts = count_corpus(contrast, max_n, config.threads);

  std::map<PhraseKey, SourceSet> candidates;

  KeyphraseOptions tfidf = config.tfidf;
  tfidf.threads = config.threads;
  for (const auto &kp : top_keyphrases(target, tfidf, config.stopwords)) {
    candidates[kp.phrase].insert(Source::kTfidf);
  }

  const std::size_t max_len =
      std::min<std::size_t>(config.embedrank_max_len, static_cast<std::size_t>(max_n));
  const auto &docs = target.documents();
  std::vector<std::vector<CandidatePhrase>> ranked(docs.size());
  parallel_for(docs.size(), config.threads, [&](std::size_t i) {
    TaggedDocument doc = tagged ? (*tagged)[i] : tagger.tag(docs[i]);
    ranked[i] = rank_candidates(doc, embeddings, config.embedrank_k_per_doc, max_len);
  });
  for (const auto &list : ranked) {
    for (const auto &cand : list) candidates[cand.phrase].insert(Source::kEmbedRank);
  }

  std::vector<PhraseKey> keys;
  keys.reserve(candidates.size());
  for (const auto &[key, sources] : candidates) {
    keys.push_back(key);
    int n = key.order();
    if (sources.contains(Source::kTfidf)) ++result.report.candidates[0][n];
    if (sources.contains(Source::kEmbedRank)) ++result.report.candidates[1][n];
    ++result.report.candidates[2][n];
  }

  Resource resource(config.filter.threshold);
  for (auto &entry : ratio_filter(keys, result.target_counts,
                                  result.contrast_counts, config.filter, label)) {
    entry.sources = candidates[entry.phrase];
    int n = entry.n();
    if (entry.sources.contains(Source::kTfidf)) ++result.report.kept[0][n];
    if (entry.sources.contains(Source::kEmbedRank)) ++result.report.kept[1][n];
    ++result.report.kept[2][n];
    resource.insert(std::move(entry));
  }
  auto &meta = resource.metadata();
  meta["label"] = std::string(label_name(label));
  meta["min_count"] = std::to_string(config.filter.min_count);
  meta["tfidf_k_per_doc"] = std::to_string(config.tfidf.k_per_doc);
  meta["tfidf_stopwords"] =
      config.tfidf.stopword_mode == StopwordMode::kRemove ? "remove" : "keep";
  meta["embedrank_k_per_doc"] = std::to_string(config.embedrank_k_per_doc);
  meta["max_n"] = std::to_string(max_n);
  result.resource = std::move(resource);
  return result;
}

}  // namespace

BuildResult build_resource(const Corpus &acad, const Corpus &nonacad,
                           const BuildConfig &config,
                           const EmbeddingTable &embeddings,
                           const LexiconTagger &tagger,
                           const std::vector<TaggedDocument> *tagged) {
  return build_contrastive(acad, nonacad, config, embeddings, tagger, tagged,
                           ResourceLabel::kAcademic);
}

BuildResult build_nonacademic(const Corpus &acad, const Corpus &nonacad,
                              const BuildConfig &config,
                              const EmbeddingTable &embeddings,
                              const LexiconTagger &tagger,
                              const std::vector<TaggedDocument> *tagged) {
  return build_contrastive(nonacad, acad, config, embeddings, tagger, tagged,
                           ResourceLabel::kNonAcademic);
}

double coverage(const std::vector<PhraseKey> &reference_list,
                const FrequencyTable &corpus_table) {
  if (reference_list.empty()) throw ArgumentError("reference list is empty");
  std::size_t hits = 0;
  for (const auto &p : reference_list) {
    if (corpus_table.count(p) >= 1) ++hits;
  }
  return 100.0 * static_cast<double>(hits) /
         static_cast<double>(reference_list.size());
}

std::vector<PhraseKey> load_phrase_list(const std::string &path) {
  std::vector<PhraseKey> out;
  std::set<PhraseKey> seen;
  for (const auto &line : read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    auto tokens = normalize_tokens(line);
    if (tokens.empty() || tokens.size() > kMaxNgramOrder) continue;
    PhraseKey key(tokens);
    if (seen.insert(key).second) out.push_back(std::move(key));
  }
  return out;
}

std::string format_resource(const Resource &resource) {
  std::string out = "#threshold\t" + format_double(resource.threshold()) + '\n';
  for (const auto &[key, value] : resource.metadata()) {
    out += '#' + key + '\t' + value + '\n';
  }
  out += kResourceHeader;
  out += '\n';
  for (const auto *e : resource.sorted()) {
    out += e->phrase.text() + '\t' + std::to_string(e->n()) + '\t' +
           format_double(e->acad_rate) + '\t' + format_double(e->nonacad_rate) +
           '\t' + format_double(e->ratio) + '\t' + e->sources.to_string() + '\t' +
           std::string(label_name(e->label)) + '\n';
  }
  return out;
}

void write_resource(const Resource &resource, const std::string &path) {
  write_file(path, format_resource(resource));
}

Resource parse_resource(const std::string &content, const std::string &source) {
  Resource resource;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (auto line : split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen && line[0] == '#') {
      auto fields = split(line.substr(1), '\t');
      if (fields.size() != 2) throw ParseError(source, line_no, "bad metadata line");
      if (fields[0] == "threshold") {
        double t = parse_double(fields[1], source, line_no);
        if (!(t > 0)) throw ParseError(source, line_no, "threshold must be positive");
        resource.set_threshold(t);
      } else {
        resource.metadata()[std::string(fields[0])] = std::string(fields[1]);
      }
      continue;
    }
    if (!header_seen) {
      if (line != kResourceHeader) {
        throw ParseError(source, line_no, "missing resource header row");
      }
      header_seen = true;
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 7) throw ParseError(source, line_no, "expected 7 fields");
    std::vector<std::string> tokens;
    for (auto t : split(fields[0], ' ')) {
      if (t.empty() || normalize_token(t) != t) {
        throw ParseError(source, line_no, "phrase is not normalized");
      }
      tokens.emplace_back(t);
    }
    auto n = parse_int(fields[1], source, line_no);
    if (n < 1 || n > kMaxNgramOrder || n != static_cast<std::int64_t>(tokens.size())) {
      throw ParseError(source, line_no, "n does not match the phrase length");
    }
    ResourceEntry entry;
    entry.phrase = PhraseKey(tokens);
    entry.acad_rate = parse_double(fields[2], source, line_no);
    entry.nonacad_rate = parse_double(fields[3], source, line_no);
    entry.ratio = parse_double(fields[4], source, line_no);
    try {
      entry.sources = SourceSet::parse(fields[5]);
    } catch (const ArgumentError &e) {
      throw ParseError(source, line_no, e.what());
    }
    if (fields[6] == "academic") {
      entry.label = ResourceLabel::kAcademic;
    } else if (fields[6] == "nonacademic") {
      entry.label = ResourceLabel::kNonAcademic;
    } else {
      throw ParseError(source, line_no, "unknown label '" + std::string(fields[6]) + "'");
    }
    if (resource.contains(entry.phrase)) {
      throw ParseError(source, line_no, "duplicate phrase '" + entry.phrase.text() + "'");
    }
    resource.insert(std::move(entry));
  }
  if (!header_seen) throw ParseError(source, line_no, "missing resource header row");
  return resource;
}

Resource read_resource(const std::string &path) {
  return parse_resource(read_file(path), path);
}

}  // namespace acadaid
