// acadaid: command-line driver for the resource, dataset, model and service
// stages. Run `acadaid --help` for the subcommand list.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "acadaid/corpus.h"
#include "acadaid/embedding.h"
#include "acadaid/error.h"
#include "acadaid/iwi.h"
#include "acadaid/lexsub.h"
#include "acadaid/ngram.h"
#include "acadaid/parallel.h"
#include "acadaid/pos.h"
#include "acadaid/ranker.h"
#include "acadaid/resource.h"
#include "acadaid/service.h"
#include "acadaid/text_util.h"
#include "acadaid/tfidf.h"

namespace fs = std::filesystem;
using namespace acadaid;

namespace {

constexpr int kExitStageFailure = 1;
constexpr int kExitUsage = 2;
constexpr const char *kEnvPrefix = "ACADAID_";

// Invalid flag combinations detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  unsigned threads = default_threads();
  std::uint64_t seed = 0;
  std::string out = "out";
};

std::string out_path(const Globals &g, const std::string &name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

// ---------------------------------------------------------------------------
// Shared inputs

struct LexiconInputs {
  std::string resource;
  std::vector<std::string> external_lists;

  void add_options(CLI::App *sub) {
    sub->add_option("--resource", resource, "Academic resource TSV")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--external-list", external_lists, "Extra academic word/phrase list")
        ->check(CLI::ExistingFile);
  }
};

// Owns the resource and lists behind an AcademicLexicon.
struct LoadedLexicon {
  Resource resource;
  std::vector<std::set<PhraseKey>> lists;
  AcademicLexicon lexicon;

  explicit LoadedLexicon(const LexiconInputs &in) : resource(read_resource(in.resource)) {
    for (const auto &path : in.external_lists) {
      auto phrases = load_phrase_list(path);
      lists.emplace_back(phrases.begin(), phrases.end());
    }
    lexicon = AcademicLexicon(&resource, lists);
  }
  LoadedLexicon(const LoadedLexicon &) = delete;
};

struct FeatureInputs {
  std::string web_freq, general_freq, academic_freq, embeddings, pos_lexicon;

  void add_options(CLI::App *sub) {
    sub->add_option("--web-freq", web_freq, "Web-scale word counts")->check(CLI::ExistingFile);
    sub->add_option("--general-freq", general_freq, "General word-list counts")
        ->check(CLI::ExistingFile);
    sub->add_option("--academic-freq", academic_freq, "Academic-corpus word counts")
        ->check(CLI::ExistingFile);
    sub->add_option("--embeddings", embeddings, "Word vectors")->check(CLI::ExistingFile);
    sub->add_option("--pos-lexicon", pos_lexicon, "word\\tTAG lexicon")
        ->check(CLI::ExistingFile);
  }
};

struct LoadedFeatures {
  std::optional<UnigramList> web, general, academic;
  std::optional<EmbeddingTable> embeddings;
  std::optional<LexiconTagger> tagger;

  explicit LoadedFeatures(const FeatureInputs &in) {
    if (!in.web_freq.empty()) web = UnigramList::load(in.web_freq);
    if (!in.general_freq.empty()) general = UnigramList::load(in.general_freq);
    if (!in.academic_freq.empty()) academic = UnigramList::load(in.academic_freq);
    if (!in.embeddings.empty()) embeddings = EmbeddingTable::load(in.embeddings);
    if (!in.pos_lexicon.empty()) tagger = LexiconTagger::load(in.pos_lexicon);
  }

  FeatureContext context() const {
    FeatureContext ctx;
    if (web) ctx.web = &*web;
    if (general) ctx.general = &*general;
    if (academic) ctx.academic = &*academic;
    if (embeddings) ctx.embeddings = &*embeddings;
    if (tagger) ctx.tagger = &*tagger;
    return ctx;
  }
};

// Labeled IWI data given either as precomputed feature rows or as lexsub
// records plus a derived label file.
struct IwiDataInputs {
  std::string rows, lexsub, iwi;

  void add_options(CLI::App *sub) {
    sub->add_option("--rows", rows, "Precomputed feature rows (label\\tv1..vd)")
        ->check(CLI::ExistingFile);
    sub->add_option("--lexsub", lexsub, "Lexical substitution JSONL")->check(CLI::ExistingFile);
    sub->add_option("--iwi", iwi, "IWI label TSV derived from --lexsub")
        ->check(CLI::ExistingFile);
  }

  FeatureRows load(FeatureSet fs, const FeatureInputs &features) const {
    if (!rows.empty()) {
      if (!lexsub.empty() || !iwi.empty()) {
        throw UsageError("--rows cannot be combined with --lexsub/--iwi");
      }
      return load_feature_rows(rows);
    }
    if (lexsub.empty() || iwi.empty()) {
      throw UsageError("give either --rows or both --lexsub and --iwi");
    }
    auto instances = load_lexsub(lexsub);
    auto dataset = load_iwi(iwi, instances);
    LoadedFeatures loaded(features);
    auto ctx = loaded.context();
    FeatureRows out;
    for (const auto &x : dataset) {
      out.rows.push_back(featurize(x, ctx).to_vector(fs));
      out.labels.push_back(x.label);
    }
    return out;
  }
};

struct RankerInputs {
  std::string groups, resource, embeddings;

  void add_options(CLI::App *sub) {
    sub->add_option("--groups", groups, "Ranking groups JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--resource", resource, "Resource TSV for rate features")
        ->check(CLI::ExistingFile);
    sub->add_option("--embeddings", embeddings, "Word vectors")->check(CLI::ExistingFile);
  }

  std::vector<FeaturizedGroup> load() const {
    std::optional<Resource> res;
    std::optional<EmbeddingTable> emb;
    if (!resource.empty()) res = read_resource(resource);
    if (!embeddings.empty()) emb = EmbeddingTable::load(embeddings);
    RankerContext ctx;
    if (res) ctx.resource = &*res;
    if (emb) ctx.embeddings = &*emb;
    return featurize_groups(load_groups(groups), ctx);
  }
};

void add_service_options(CLI::App *sub, ServiceConfig &cfg) {
  sub->add_option("--resource", cfg.resource, "Academic resource TSV");
  sub->add_option("--iwi-model", cfg.iwi_model, "IWI model JSON");
  sub->add_option("--ranker-model", cfg.ranker_model, "Ranker model JSON");
  sub->add_option("--lexicon", cfg.lexicons, "Synonym lexicon (word\\tsynonym\\tscore)");
  sub->add_option("--external-list", cfg.external_lists, "Extra academic list");
  sub->add_option("--embeddings", cfg.embeddings, "Word vectors");
  sub->add_option("--web-freq", cfg.web_freq, "Web-scale word counts");
  sub->add_option("--general-freq", cfg.general_freq, "General word-list counts");
  sub->add_option("--academic-freq", cfg.academic_freq, "Academic-corpus word counts");
  sub->add_option("--pos-lexicon", cfg.pos_lexicon, "word\\tTAG lexicon");
}

std::string format_unigrams(const FrequencyTable &table) {
  std::string out;
  for (const auto &key : table.sorted_keys()) {
    if (key.order() != 1) continue;
    out += key.text() + '\t' + std::to_string(table.count(key)) + '\n';
  }
  return out;
}

std::string format_prf_row(const std::string &name, const PrfScores &s) {
  return name + '\t' + format_double(s.precision) + '\t' + format_double(s.recall) + '\t' +
         format_double(s.f1) + '\n';
}

// ---------------------------------------------------------------------------
// Subcommands

struct BuildResourceCmd {
  std::string acad_corpus, nonacad_corpus;
  std::string acad_format = "one-doc-per-line", nonacad_format = "one-doc-per-line";
  std::string acad_tagged, nonacad_tagged;
  std::string stopwords, stopword_mode = "remove";
  std::string embeddings, pos_lexicon;
  bool no_downsample = false;
  int k_per_doc = 10, max_n = 4, embedrank_k = 10;
  std::size_t embedrank_max_len = 4;
  double threshold = 1.5;
  std::uint64_t min_count = 5;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("build-resource",
                                   "Extract keyphrases and keep the academic ones");
    sub->add_option("--acad-corpus", acad_corpus)->required()->check(CLI::ExistingPath);
    sub->add_option("--nonacad-corpus", nonacad_corpus)->required()->check(CLI::ExistingPath);
    sub->add_option("--acad-format", acad_format)
        ->check(CLI::IsMember({"one-doc-per-file", "one-doc-per-line", "jsonl"}));
    sub->add_option("--nonacad-format", nonacad_format)
        ->check(CLI::IsMember({"one-doc-per-file", "one-doc-per-line", "jsonl"}));
    sub->add_option("--acad-tagged", acad_tagged, "Pre-tagged academic documents")
        ->check(CLI::ExistingFile);
    sub->add_option("--nonacad-tagged", nonacad_tagged, "Pre-tagged non-academic documents")
        ->check(CLI::ExistingFile);
    sub->add_option("--stopwords", stopwords)->check(CLI::ExistingFile);
    sub->add_option("--stopword-mode", stopword_mode)->check(CLI::IsMember({"keep", "remove"}));
    sub->add_option("--embeddings", embeddings)->required()->check(CLI::ExistingFile);
    sub->add_option("--pos-lexicon", pos_lexicon)->check(CLI::ExistingFile);
    sub->add_flag("--no-downsample", no_downsample,
                  "Keep the whole non-academic corpus instead of matching token counts");
    sub->add_option("--k-per-doc", k_per_doc)->check(CLI::PositiveNumber);
    sub->add_option("--max-n", max_n)->check(CLI::Range(1, 4));
    sub->add_option("--embedrank-k", embedrank_k)->check(CLI::PositiveNumber);
    sub->add_option("--embedrank-max-len", embedrank_max_len)->check(CLI::Range(1, 4));
    sub->add_option("--threshold", threshold)->check(CLI::PositiveNumber);
    sub->add_option("--min-count", min_count);
  }

  static std::vector<TaggedDocument> align_tags(const std::string &path, const Corpus &corpus) {
    std::unordered_map<std::string, TaggedDocument> by_id;
    for (auto &d : load_tagged_corpus(path)) by_id.emplace(d.id, std::move(d));
    std::vector<TaggedDocument> out;
    for (const auto &doc : corpus.documents()) {
      auto it = by_id.find(doc.id);
      if (it == by_id.end()) {
        throw ArgumentError(path + ": no tagged document with id '" + doc.id + "'");
      }
      out.push_back(it->second);
    }
    return out;
  }

  int run(const Globals &g) const {
    Corpus acad = load_corpus(acad_corpus, parse_corpus_format(acad_format), Domain::kAcademic,
                              g.threads);
    Corpus nonacad = load_corpus(nonacad_corpus, parse_corpus_format(nonacad_format),
                                 Domain::kNonAcademic, g.threads);
    if (!no_downsample) nonacad = downsample(nonacad, acad.token_count(), g.seed);

    BuildConfig cfg;
    cfg.tfidf.k_per_doc = k_per_doc;
    cfg.tfidf.max_n = max_n;
    cfg.tfidf.stopword_mode = parse_stopword_mode(stopword_mode);
    cfg.tfidf.threads = g.threads;
    if (!stopwords.empty()) cfg.stopwords = load_stopwords(stopwords);
    cfg.embedrank_k_per_doc = embedrank_k;
    cfg.embedrank_max_len = embedrank_max_len;
    cfg.filter.threshold = threshold;
    cfg.filter.min_count = min_count;
    cfg.threads = g.threads;

    EmbeddingTable emb = EmbeddingTable::load(embeddings);
    LexiconTagger tagger;
    if (!pos_lexicon.empty()) tagger = LexiconTagger::load(pos_lexicon);
    std::optional<std::vector<TaggedDocument>> acad_tags, nonacad_tags;
    if (!acad_tagged.empty()) acad_tags = align_tags(acad_tagged, acad);
    if (!nonacad_tagged.empty()) nonacad_tags = align_tags(nonacad_tagged, nonacad);

    BuildResult academic = build_resource(acad, nonacad, cfg, emb, tagger,
                                          acad_tags ? &*acad_tags : nullptr);
    BuildResult other = build_nonacademic(acad, nonacad, cfg, emb, tagger,
                                          nonacad_tags ? &*nonacad_tags : nullptr);

    write_resource(academic.resource, out_path(g, "resource.tsv"));
    write_resource(other.resource, out_path(g, "nonacademic_resource.tsv"));
    write_file(out_path(g, "build_report.tsv"), academic.report.to_tsv());
    write_file(out_path(g, "nonacademic_report.tsv"), other.report.to_tsv());
    write_frequency_table(academic.target_counts, out_path(g, "acad_counts.tsv"));
    write_frequency_table(academic.contrast_counts, out_path(g, "nonacad_counts.tsv"));
    write_file(out_path(g, "acad_unigrams.tsv"), format_unigrams(academic.target_counts));
    std::cout << "academic documents\t" << acad.size() << "\ttokens\t" << acad.token_count()
              << "\nnon-academic documents\t" << nonacad.size() << "\ttokens\t"
              << nonacad.token_count() << "\nacademic entries\t" << academic.resource.size()
              << "\nnon-academic entries\t" << other.resource.size() << '\n';
    return 0;
  }
};

struct CoverageCmd {
  std::string list, corpus, format = "one-doc-per-line", counts;
  int max_n = 4;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("coverage", "Share of a reference list found in a corpus");
    sub->add_option("--list", list, "Reference phrase list")->required()->check(CLI::ExistingFile);
    auto *c = sub->add_option("--corpus", corpus)->check(CLI::ExistingPath);
    sub->add_option("--format", format)
        ->check(CLI::IsMember({"one-doc-per-file", "one-doc-per-line", "jsonl"}));
    auto *t = sub->add_option("--counts", counts, "Frequency table TSV instead of --corpus")
                  ->check(CLI::ExistingFile);
    c->excludes(t);
    sub->add_option("--max-n", max_n)->check(CLI::Range(1, 4));
  }

  int run(const Globals &g) const {
    if (corpus.empty() && counts.empty()) throw UsageError("give --corpus or --counts");
    FrequencyTable table =
        counts.empty() ? count_corpus(load_corpus(corpus, parse_corpus_format(format),
                                                  Domain::kAcademic, g.threads),
                                      max_n, g.threads)
                       : read_frequency_table(counts);
    std::cout << "coverage\t" << format_double(coverage(load_phrase_list(list), table)) << '\n';
    return 0;
  }
};

struct MakeIwiCmd {
  std::string lexsub;
  LexiconInputs lex;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("make-iwi", "Label lexsub targets as informal or formal");
    sub->add_option("--lexsub", lexsub)->required()->check(CLI::ExistingFile);
    lex.add_options(sub);
  }

  int run(const Globals &g) const {
    LoadedLexicon loaded(lex);
    auto instances = load_lexsub(lexsub);
    auto dataset = derive_iwi(instances, loaded.lexicon);
    write_file(out_path(g, "iwi.tsv"), format_iwi(dataset));
    write_file(out_path(g, "academic_lexsub.jsonl"),
               format_lexsub(convert_corpus(instances, loaded.lexicon)));
    auto s = iwi_stats(dataset);
    std::cout << "informal\t" << s.informal_tokens << "\nformal\t" << s.formal_tokens << '\n';
    return 0;
  }
};

struct IwiStatsCmd {
  std::string lexsub, iwi;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("iwi-stats", "Token and type counts per IWI label");
    sub->add_option("--lexsub", lexsub)->required()->check(CLI::ExistingFile);
    sub->add_option("--iwi", iwi)->required()->check(CLI::ExistingFile);
  }

  int run(const Globals &g) const {
    auto s = iwi_stats(load_iwi(iwi, load_lexsub(lexsub)));
    std::string table = "label\ttokens\ttypes\ninformal\t" + std::to_string(s.informal_tokens) +
                        '\t' + std::to_string(s.informal_types) + "\nformal\t" +
                        std::to_string(s.formal_tokens) + '\t' +
                        std::to_string(s.formal_types) + '\n';
    write_file(out_path(g, "iwi_stats.tsv"), table);
    std::cout << table;
    return 0;
  }
};

struct MakePairsCmd {
  std::string lexsub, acad_counts, nonacad_counts;
  LexiconInputs lex;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("make-pairs", "Derive informal/academic word pairs");
    sub->add_option("--lexsub", lexsub)->required()->check(CLI::ExistingFile);
    sub->add_option("--acad-counts", acad_counts)->required()->check(CLI::ExistingFile);
    sub->add_option("--nonacad-counts", nonacad_counts)->required()->check(CLI::ExistingFile);
    lex.add_options(sub);
  }

  int run(const Globals &g) const {
    LoadedLexicon loaded(lex);
    auto pairs = derive_pairs(load_lexsub(lexsub), loaded.lexicon,
                              read_frequency_table(acad_counts),
                              read_frequency_table(nonacad_counts));
    write_file(out_path(g, "pairs.tsv"), format_pairs(pairs));
    std::cout << "pairs\t" << pairs.size() << '\n';
    return 0;
  }
};

struct MakeGroupsCmd {
  std::string lexsub;
  std::vector<std::string> lexicons;
  LexiconInputs lex;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("make-groups", "Build 4-candidate ranking groups");
    sub->add_option("--lexsub", lexsub)->required()->check(CLI::ExistingFile);
    sub->add_option("--lexicon", lexicons, "Fallback synonym lexicon, in priority order")
        ->check(CLI::ExistingFile);
    lex.add_options(sub);
  }

  int run(const Globals &g) const {
    LoadedLexicon loaded(lex);
    std::vector<SynonymLexicon> syn;
    for (const auto &path : lexicons) syn.push_back(SynonymLexicon::load(path));
    std::vector<const SynonymLexicon *> ptrs;
    for (const auto &s : syn) ptrs.push_back(&s);
    auto result = build_groups(load_lexsub(lexsub), loaded.lexicon, ptrs);
    write_file(out_path(g, "groups.jsonl"), format_groups(result.groups));
    std::cout << "groups\t" << result.groups.size() << "\ndropped\t" << result.dropped << '\n';
    return 0;
  }
};

struct TrainIwiCmd {
  IwiDataInputs data;
  FeatureInputs features;
  std::string feature_set = "fe1";
  IwiHyperparams params;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("train-iwi", "Train the informal-word classifier");
    data.add_options(sub);
    features.add_options(sub);
    sub->add_option("--feature-set", feature_set)->check(CLI::IsMember({"fe1", "fe2", "fe3"}));
    sub->add_option("--c", params.c)->check(CLI::PositiveNumber);
    sub->add_option("--gamma", params.gamma, "RBF width; 0 picks it from the data");
    sub->add_option("--tolerance", params.tolerance)->check(CLI::PositiveNumber);
    sub->add_option("--max-iterations", params.max_iterations);
  }

  int run(const Globals &g) const {
    FeatureSet fs = parse_feature_set(feature_set);
    FeatureRows rows = data.load(fs, features);
    IwiHyperparams p = params;
    p.seed = g.seed;
    IwiModel model = train_iwi_rows(rows.rows, rows.labels, fs, p);
    save_iwi_model(model, out_path(g, "iwi_model.json"));
    std::cout << "support vectors\t" << model.svm().support_vectors().size() << '\n';
    return 0;
  }
};

struct EvalIwiCmd {
  std::string model_path;
  IwiDataInputs data;
  FeatureInputs features;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("eval-iwi", "Score the classifier and the stratified baseline");
    sub->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    data.add_options(sub);
    features.add_options(sub);
  }

  int run(const Globals &g) const {
    IwiModel model = load_iwi_model(model_path);
    FeatureRows test = data.load(model.feature_set(), features);
    std::vector<IwiLabel> predicted;
    for (const auto &row : test.rows) predicted.push_back(model.predict(row));
    std::size_t train_total = model.train_informal() + model.train_formal();
    double fraction = train_total == 0 ? 0.0
                                       : static_cast<double>(model.train_informal()) /
                                             static_cast<double>(train_total);
    StratifiedBaseline baseline(fraction, g.seed);
    std::string table = "system\tprecision\trecall\tf1\n" +
                        format_prf_row("baseline", evaluate(baseline.predict(test.rows.size()),
                                                            test.labels)) +
                        format_prf_row(std::string("svm-") +
                                           std::string(feature_set_name(model.feature_set())),
                                       evaluate(predicted, test.labels));
    write_file(out_path(g, "iwi_eval.tsv"), table);
    std::cout << table;
    return 0;
  }
};

struct TrainRankerCmd {
  RankerInputs inputs;
  std::string loss = "logistic";
  RankerTrainOptions options;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("train-ranker", "Train the candidate ranker");
    inputs.add_options(sub);
    sub->add_option("--loss", loss)->check(CLI::IsMember({"logistic", "softmax"}));
    sub->add_option("--steps", options.steps)->check(CLI::PositiveNumber);
    sub->add_option("--lr", options.learning_rate)->check(CLI::PositiveNumber);
    sub->add_option("--hidden", options.hidden, "Hidden units; 0 for a linear scorer");
  }

  int run(const Globals &g) const {
    RankerTrainOptions opts = options;
    opts.loss = parse_rank_loss(loss);
    opts.seed = g.seed;
    auto groups = inputs.load();
    auto result = train_ranker(groups, opts);
    if (result.skipped > 0) {
      std::cerr << "warning: skipped " << result.skipped << " group(s) without a relevant candidate\n";
    }
    save_ranker(result.model, out_path(g, "ranker_model.json"));
    std::string losses = "step\tloss\n";
    for (std::size_t i = 0; i < result.losses.size(); ++i) {
      losses += std::to_string(i) + '\t' + format_double(result.losses[i]) + '\n';
    }
    write_file(out_path(g, "ranker_losses.tsv"), losses);
    std::cout << "final loss\t" << format_double(result.losses.back()) << '\n';
    return 0;
  }
};

struct EvalRankerCmd {
  std::string model_path;
  RankerInputs inputs;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("eval-ranker", "Mean reciprocal rank on ranking groups");
    sub->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    inputs.add_options(sub);
  }

  int run(const Globals &g) const {
    RankerModel model = load_ranker(model_path);
    auto m = mrr(model, inputs.load());
    if (m.excluded > 0) {
      std::cerr << "warning: excluded " << m.excluded << " group(s) without a relevant candidate\n";
    }
    std::string table = "mrr\tevaluated\texcluded\n" + format_double(m.mrr) + '\t' +
                        std::to_string(m.evaluated) + '\t' + std::to_string(m.excluded) + '\n';
    write_file(out_path(g, "ranker_eval.tsv"), table);
    std::cout << table;
    return 0;
  }
};

struct AnalyzeCmd {
  ServiceConfig cfg;
  std::size_t k = 4;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("analyze", "Analyze stdin and print the result as JSON");
    add_service_options(sub, cfg);
    sub->add_option("--k", k, "Suggestions per flagged word");
  }

  int run(const Globals &) const {
    std::string text(std::istreambuf_iterator<char>(std::cin), {});
    auto state = ServiceState::load(cfg);
    if (!state->ready()) {
      std::string gaps;
      for (const auto &m : state->missing()) gaps += "\n  " + m;
      throw UnavailableError("required artifacts are missing:" + gaps);
    }
    std::cout << analyze(*state, text, k).to_json().dump() << '\n';
    return 0;
  }
};

std::atomic<bool> g_reload{false};
std::atomic<bool> g_stop{false};

extern "C" void on_signal(int sig) {
  if (sig == SIGHUP) g_reload = true;
  else g_stop = true;
}

struct ServeCmd {
  ServiceConfig cfg;

  void add(CLI::App &app) {
    auto *sub = app.add_subcommand("serve", "Run the HTTP service (SIGHUP reloads artifacts)");
    add_service_options(sub, cfg);
    sub->add_option("--host", cfg.host);
    sub->add_option("--port", cfg.port)->check(CLI::Range(0, 65535));
    sub->add_option("--cors-origin", cfg.cors_origin);
  }

  int run(const Globals &) const {
    ServiceConfig config = cfg;
    WritingAidServer server([config] { return ServiceState::load(config); }, config.cors_origin);
    for (const auto &m : server.state()->missing()) std::cerr << "missing " << m << '\n';
    int port = config.port;
    if (port == 0) {
      port = server.bind_any(config.host);
    } else if (!server.bind(config.host, port)) {
      port = -1;
    }
    if (port < 0) throw IoError("cannot bind " + config.host + ":" + std::to_string(config.port));
    std::signal(SIGHUP, on_signal);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread watcher([&server] {
      while (!g_stop) {
        if (g_reload.exchange(false)) {
          std::string error;
          if (server.reload(&error)) std::cerr << "reloaded artifacts\n";
          else std::cerr << "reload failed, keeping previous state: " << error << '\n';
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      server.stop();
    });
    std::cerr << "listening on " << config.host << ':' << port << std::endl;
    bool ok = server.listen_after_bind();
    g_stop = true;
    watcher.join();
    return ok ? 0 : kExitStageFailure;
  }
};

// ---------------------------------------------------------------------------
// Environment overrides. Every long option of the chosen subcommand (and the
// global ones) can be set through ACADAID_<NAME>, which replaces any value
// given on the command line or in the config file. Vector options take a
// comma-separated list.

std::string env_name(const std::string &long_name) {
  std::string name = kEnvPrefix;
  for (char c : long_name) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

// Drops `flag` and its values. A single-valued option takes one value; a
// multi-valued one runs until the next option or subcommand name.
std::vector<std::string> remove_option(const CLI::App &app, const std::vector<std::string> &args,
                                       const std::string &flag, bool multi) {
  auto is_subcommand = [&](const std::string &a) { return app.get_subcommand_no_throw(a) != nullptr; };
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].rfind(flag + "=", 0) == 0) continue;
    if (args[i] == flag) {
      if (!multi) {
        ++i;
        continue;
      }
      while (i + 1 < args.size() && args[i + 1].rfind("-", 0) != 0 && !is_subcommand(args[i + 1])) ++i;
      continue;
    }
    out.push_back(args[i]);
  }
  return out;
}

void apply_env(const CLI::App &app, const CLI::App *sub, std::vector<std::string> &args) {
  for (const CLI::App *scope : {&app, sub}) {
    if (!scope) continue;
    for (const CLI::Option *opt : scope->get_options()) {
      if (opt->get_lnames().empty() || opt->get_expected_min() == 0) continue;
      const std::string &name = opt->get_lnames().front();
      if (name == "config" || name == "help") continue;
      const char *value = std::getenv(env_name(name).c_str());
      if (!value) continue;
      const std::string flag = "--" + name;
      const bool multi = opt->get_items_expected_max() > 1;
      args = remove_option(app, args, flag, multi);
      std::vector<std::string> values = {value};
      if (multi) {
        values.clear();
        for (auto part : split(value, ',')) values.emplace_back(part);
      }
      for (const auto &v : values) args.push_back(flag + "=" + v);
    }
  }
}

// TOML reader that keeps top-level keys and the chosen subcommand's section,
// so that paths for other stages are neither applied nor validated.
class StageConfig : public CLI::ConfigTOML {
 public:
  void select(std::string stage) { stage_ = std::move(stage); }

  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    std::erase_if(items, [&](const CLI::ConfigItem &item) {
      return !item.parents.empty() && item.parents.front() != stage_;
    });
    return items;
  }

 private:
  std::string stage_;
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app("Academic writing aid: resource building, datasets, models and service",
               "acadaid");
  app.fallthrough();
  app.set_config("--config", "", "TOML-style config; [subcommand] sections apply to one stage");
  app.allow_config_extras(CLI::config_extras_mode::ignore);
  auto config_reader = std::make_shared<StageConfig>();
  app.config_formatter(config_reader);
  app.require_subcommand(1);

  Globals g;
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--out", g.out, "Output directory");

  BuildResourceCmd build_resource_cmd;
  CoverageCmd coverage_cmd;
  MakeIwiCmd make_iwi_cmd;
  IwiStatsCmd iwi_stats_cmd;
  MakePairsCmd make_pairs_cmd;
  MakeGroupsCmd make_groups_cmd;
  TrainIwiCmd train_iwi_cmd;
  EvalIwiCmd eval_iwi_cmd;
  TrainRankerCmd train_ranker_cmd;
  EvalRankerCmd eval_ranker_cmd;
  AnalyzeCmd analyze_cmd;
  ServeCmd serve_cmd;
  build_resource_cmd.add(app);
  coverage_cmd.add(app);
  make_iwi_cmd.add(app);
  iwi_stats_cmd.add(app);
  make_pairs_cmd.add(app);
  make_groups_cmd.add(app);
  train_iwi_cmd.add(app);
  eval_iwi_cmd.add(app);
  train_ranker_cmd.add(app);
  eval_ranker_cmd.add(app);
  analyze_cmd.add(app);
  serve_cmd.add(app);

  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }
  auto parse = [&](std::vector<std::string> a) {
    std::reverse(a.begin(), a.end());
    app.parse(a);
  };
  try {
    const CLI::App *chosen = nullptr;
    for (const auto &a : args) {
      if (a.rfind("-", 0) == 0) continue;
      try {
        chosen = app.get_subcommand(a);
        break;
      } catch (const CLI::OptionNotFound &) {
      }
    }
    if (chosen) config_reader->select(chosen->get_name());
    apply_env(app, chosen, args);
    parse(args);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "build-resource") return build_resource_cmd.run(g);
    if (name == "coverage") return coverage_cmd.run(g);
    if (name == "make-iwi") return make_iwi_cmd.run(g);
    if (name == "iwi-stats") return iwi_stats_cmd.run(g);
    if (name == "make-pairs") return make_pairs_cmd.run(g);
    if (name == "make-groups") return make_groups_cmd.run(g);
    if (name == "train-iwi") return train_iwi_cmd.run(g);
    if (name == "eval-iwi") return eval_iwi_cmd.run(g);
    if (name == "train-ranker") return train_ranker_cmd.run(g);
    if (name == "eval-ranker") return eval_ranker_cmd.run(g);
    if (name == "analyze") return analyze_cmd.run(g);
    if (name == "serve") return serve_cmd.run(g);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStageFailure;
  }
  return kExitUsage;
}
