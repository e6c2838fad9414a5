#include "acadaid/iwi.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acadaid/corpus.h"
#include "acadaid/error.h"
#include "acadaid/text_util.h"

namespace acadaid {

using nlohmann::json;

namespace {

constexpr std::string_view kModelFormat = "acadaid-iwi-model";
constexpr int kModelVersion = 1;

}  // namespace

FeatureSet parse_feature_set(std::string_view name) {
  if (name == "fe1" || name == "Fe1") return FeatureSet::kFe1;
  if (name == "fe2" || name == "Fe2") return FeatureSet::kFe2;
  if (name == "fe3" || name == "Fe3") return FeatureSet::kFe3;
  throw ArgumentError("unknown feature set '" + std::string(name) + "'");
}

std::string_view feature_set_name(FeatureSet fs) {
  switch (fs) {
    case FeatureSet::kFe1: return "fe1";
    case FeatureSet::kFe2: return "fe2";
    case FeatureSet::kFe3: return "fe3";
  }
  return "fe1";
}

std::size_t feature_dim(FeatureSet fs) {
  switch (fs) {
    case FeatureSet::kFe1: return 4;
    case FeatureSet::kFe2: return 5;
    case FeatureSet::kFe3: return 5 + kNumPosTags + 2;
  }
  return 4;
}

Vector FeatureVector::to_vector(FeatureSet fs) const {
  Vector v = {freq_web, freq_general, freq_academic, cos_word_sent};
  if (fs == FeatureSet::kFe1) return v;
  v.push_back(eucl_word_sent);
  if (fs == FeatureSet::kFe2) return v;
  v.insert(v.end(), pos_onehot.begin(), pos_onehot.end());
  v.push_back(word_length);
  v.push_back(vowel_count);
  return v;
}

std::size_t count_vowels(std::string_view word) {
  return std::count_if(word.begin(), word.end(), [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  });
}

FeatureVector featurize_token(const std::vector<std::string> &tokens,
                              std::size_t index, const FeatureContext &ctx) {
  if (index >= tokens.size()) throw ArgumentError("token index out of range");
  const std::string &word = tokens[index];
  FeatureVector f;
  if (ctx.web) f.freq_web = ctx.web->per_million(word);
  if (ctx.general) f.freq_general = ctx.general->per_million(word);
  if (ctx.academic) f.freq_academic = ctx.academic->per_million(word);

  if (ctx.embeddings) {
    std::vector<std::string> words;
    for (const auto &t : tokens) {
      if (!t.empty()) words.push_back(t);
    }
    auto sent = ctx.embeddings->mean(words);
    auto wv = ctx.embeddings->find(word);
    if (sent && !wv.empty()) {
      Vector w(wv.begin(), wv.end());
      f.cos_word_sent = cosine(w, *sent);
      f.eucl_word_sent = euclidean(w, *sent);
    } else if (sent) {
      f.eucl_word_sent = norm(*sent);
    }
  }

  PosTag tag = PosTag::kNoun;
  if (ctx.tagger) tag = ctx.tagger->tag_word(word);
  f.pos_onehot[static_cast<std::size_t>(tag)] = 1.0;
  f.word_length = static_cast<double>(word.size());
  f.vowel_count = static_cast<double>(count_vowels(word));
  return f;
}

FeatureVector featurize(const IWIInstance &instance, const FeatureContext &ctx) {
  std::vector<std::string> tokens;
  tokens.reserve(instance.sentence.size());
  for (const auto &raw : instance.sentence) tokens.push_back(normalize_token(raw));
  return featurize_token(tokens, instance.token_index, ctx);
}

Standardizer::Standardizer(Vector mean, Vector scale)
    : mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != scale_.size()) throw ArgumentError("mean/scale size mismatch");
}

Standardizer Standardizer::fit(const std::vector<Vector> &rows) {
  if (rows.empty()) throw ArgumentError("cannot fit a scaler on no rows");
  const std::size_t d = rows.front().size();
  Vector mean(d, 0.0), scale(d, 1.0);
  const double n = static_cast<double>(rows.size());
  for (const auto &r : rows) {
    for (std::size_t k = 0; k < d; ++k) mean[k] += r[k];
  }
  for (auto &m : mean) m /= n;
  for (std::size_t k = 0; k < d; ++k) {
    double ss = 0;
    for (const auto &r : rows) ss += (r[k] - mean[k]) * (r[k] - mean[k]);
    double sd = std::sqrt(ss / n);
    scale[k] = sd > 1e-12 ? sd : 1.0;
  }
  return Standardizer(std::move(mean), std::move(scale));
}

Vector Standardizer::apply(std::span<const double> row) const {
  if (row.size() != mean_.size()) {
    throw ArgumentError("expected " + std::to_string(mean_.size()) +
                        " features, got " + std::to_string(row.size()));
  }
  Vector out(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) out[k] = (row[k] - mean_[k]) / scale_[k];
  return out;
}

IwiModel::IwiModel(FeatureSet fs, Standardizer scaler, RbfSvm svm,
                   std::size_t train_informal, std::size_t train_formal)
    : feature_set_(fs),
      scaler_(std::move(scaler)),
      svm_(std::move(svm)),
      train_informal_(train_informal),
      train_formal_(train_formal) {}

double IwiModel::decision_value(std::span<const double> raw) const {
  if (raw.size() != feature_dim(feature_set_) || raw.size() != scaler_.dim()) {
    throw ArgumentError("model expects " + std::to_string(scaler_.dim()) +
                        " features, got " + std::to_string(raw.size()));
  }
  return svm_.decision(scaler_.apply(raw));
}

IwiLabel IwiModel::predict(std::span<const double> raw) const {
  return decision_value(raw) > 0 ? IwiLabel::kInformal : IwiLabel::kFormal;
}

IwiLabel IwiModel::predict(const FeatureVector &features) const {
  return predict(features.to_vector(feature_set_));
}

double IwiModel::informal_confidence(std::span<const double> raw) const {
  return 1.0 / (1.0 + std::exp(-decision_value(raw)));
}

IwiModel train_iwi_rows(const std::vector<Vector> &rows,
                        const std::vector<IwiLabel> &labels, FeatureSet fs,
                        const IwiHyperparams &params) {
  if (rows.size() != labels.size()) throw ArgumentError("rows and labels differ in size");
  if (rows.empty()) throw TrainingError("no training data");
  const std::size_t d = feature_dim(fs);
  for (const auto &r : rows) {
    if (r.size() != d) throw ArgumentError("training row has the wrong dimension");
  }
  std::size_t informal = std::count(labels.begin(), labels.end(), IwiLabel::kInformal);
  std::size_t formal = labels.size() - informal;
  if (informal == 0 || formal == 0) {
    throw TrainingError("training data must contain both informal and formal labels");
  }

  // Canonical order first, so that every floating-point sum below is
  // independent of the input order.
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a] != rows[b]) return rows[a] < rows[b];
    return labels[a] < labels[b];
  });
  std::vector<Vector> sorted;
  sorted.reserve(order.size());
  for (std::size_t idx : order) sorted.push_back(rows[idx]);

  Standardizer scaler = Standardizer::fit(sorted);
  std::vector<Vector> xs;
  std::vector<int> ys;
  xs.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    xs.push_back(scaler.apply(sorted[i]));
    ys.push_back(labels[order[i]] == IwiLabel::kInformal ? 1 : -1);
  }

  double gamma = params.gamma;
  if (!(gamma > 0)) {
    double sum = 0, sq = 0, count = 0;
    for (const auto &r : xs) {
      for (double v : r) {
        sum += v;
        sq += v * v;
        count += 1;
      }
    }
    double mean = sum / count;
    double var = sq / count - mean * mean;
    gamma = var > 1e-12 ? 1.0 / (static_cast<double>(d) * var) : 1.0;
  }

  SvmParams svm_params;
  svm_params.c = params.c;
  svm_params.gamma = gamma;
  svm_params.tolerance = params.tolerance;
  svm_params.max_iterations = params.max_iterations;
  SvmSolution sol = train_rbf_svm(xs, ys, svm_params);
  return IwiModel(fs, std::move(scaler), std::move(sol.model), informal, formal);
}

IwiModel train_iwi(const std::vector<FeatureVector> &features,
                   const std::vector<IwiLabel> &labels, FeatureSet fs,
                   const IwiHyperparams &params) {
  std::vector<Vector> rows;
  rows.reserve(features.size());
  for (const auto &f : features) rows.push_back(f.to_vector(fs));
  return train_iwi_rows(rows, labels, fs, params);
}

json iwi_model_to_json(const IwiModel &model) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["feature_set"] = feature_set_name(model.feature_set());
  j["mean"] = model.scaler().mean();
  j["scale"] = model.scaler().scale();
  j["gamma"] = model.svm().gamma();
  j["bias"] = model.svm().bias();
  j["support_vectors"] = model.svm().support_vectors();
  j["coefficients"] = model.svm().coefficients();
  j["train_informal"] = model.train_informal();
  j["train_formal"] = model.train_formal();
  return j;
}

IwiModel iwi_model_from_json(const json &j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw ArgumentError("not an IWI model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw ArgumentError("unsupported IWI model version");
    }
    FeatureSet fs = parse_feature_set(j.at("feature_set").get<std::string>());
    Standardizer scaler(j.at("mean").get<Vector>(), j.at("scale").get<Vector>());
    if (scaler.dim() != feature_dim(fs)) {
      throw ArgumentError("scaler dimension does not match the feature set");
    }
    auto sv = j.at("support_vectors").get<std::vector<Vector>>();
    for (const auto &v : sv) {
      if (v.size() != scaler.dim()) throw ArgumentError("support vector dimension mismatch");
    }
    RbfSvm svm(std::move(sv), j.at("coefficients").get<std::vector<double>>(),
               j.at("bias").get<double>(), j.at("gamma").get<double>());
    return IwiModel(fs, std::move(scaler), std::move(svm),
                    j.at("train_informal").get<std::size_t>(),
                    j.at("train_formal").get<std::size_t>());
  } catch (const json::exception &e) {
    throw ArgumentError(std::string("malformed IWI model: ") + e.what());
  }
}

void save_iwi_model(const IwiModel &model, const std::string &path) {
  write_file(path, iwi_model_to_json(model).dump(1) + "\n");
}

IwiModel load_iwi_model(const std::string &path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error &e) {
    throw ParseError(path, 1, std::string("malformed JSON: ") + e.what());
  }
  return iwi_model_from_json(j);
}

FeatureRows load_feature_rows(const std::string &path) {
  FeatureRows data;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto &line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2) throw ParseError(path, i + 1, "expected a label and features");
    IwiLabel label;
    try {
      label = parse_iwi_label(fields[0]);
    } catch (const ArgumentError &e) {
      throw ParseError(path, i + 1, e.what());
    }
    Vector row;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      row.push_back(parse_double(fields[k], path, i + 1));
    }
    if (!data.rows.empty() && row.size() != data.rows.front().size()) {
      throw ParseError(path, i + 1, "row dimension differs from the first row");
    }
    data.rows.push_back(std::move(row));
    data.labels.push_back(label);
  }
  return data;
}

std::string format_feature_rows(const FeatureRows &data) {
  std::string out;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    out += iwi_label_name(data.labels[i]);
    for (double v : data.rows[i]) out += '\t' + format_double(v);
    out += '\n';
  }
  return out;
}

StratifiedBaseline::StratifiedBaseline(double informal_fraction, std::uint64_t seed)
    : informal_fraction_(informal_fraction), rng_(seed) {
  if (!(informal_fraction >= 0.0 && informal_fraction <= 1.0)) {
    throw ArgumentError("class fraction must lie in [0, 1]");
  }
}

IwiLabel StratifiedBaseline::next() {
  return uniform_unit(rng_) < informal_fraction_ ? IwiLabel::kInformal
                                                  : IwiLabel::kFormal;
}

std::vector<IwiLabel> StratifiedBaseline::predict(std::size_t count) {
  std::vector<IwiLabel> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

StratifiedBaseline stratified_baseline(const std::vector<IwiLabel> &train_labels,
                                       std::uint64_t seed) {
  if (train_labels.empty()) return StratifiedBaseline(0.0, seed);
  double informal = static_cast<double>(
      std::count(train_labels.begin(), train_labels.end(), IwiLabel::kInformal));
  return StratifiedBaseline(informal / static_cast<double>(train_labels.size()), seed);
}

PrfScores evaluate(const std::vector<IwiLabel> &predicted,
                   const std::vector<IwiLabel> &gold) {
  if (gold.empty()) throw ArgumentError("evaluation data is empty");
  if (predicted.size() != gold.size()) {
    throw ArgumentError("prediction and gold counts differ");
  }
  PrfScores s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    bool p = predicted[i] == IwiLabel::kInformal;
    bool g = gold[i] == IwiLabel::kInformal;
    if (p && g) ++s.tp;
    else if (p) ++s.fp;
    else if (g) ++s.fn;
    else ++s.tn;
  }
  if (s.tp + s.fp > 0) s.precision = static_cast<double>(s.tp) / (s.tp + s.fp);
  if (s.tp + s.fn > 0) s.recall = static_cast<double>(s.tp) / (s.tp + s.fn);
  if (s.precision + s.recall > 0) {
    s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

}  // namespace acadaid
