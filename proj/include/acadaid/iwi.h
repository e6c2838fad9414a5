#ifndef ACADAID_IWI_H_
#define ACADAID_IWI_H_

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "acadaid/embedding.h"
#include "acadaid/lexsub.h"
#include "acadaid/ngram.h"
#include "acadaid/pos.h"
#include "acadaid/svm.h"

namespace acadaid {

// Fe1 = frequencies + cosine, Fe2 = Fe1 + Euclidean distance,
// Fe3 = everything (adds the POS one-hot, word length and vowel count).
enum class FeatureSet { kFe1, kFe2, kFe3 };

FeatureSet parse_feature_set(std::string_view name);
std::string_view feature_set_name(FeatureSet fs);
std::size_t feature_dim(FeatureSet fs);

struct FeatureVector {
  double freq_web = 0.0;
  double freq_general = 0.0;
  double freq_academic = 0.0;
  double cos_word_sent = 0.0;
  double eucl_word_sent = 0.0;
  std::array<double, kNumPosTags> pos_onehot{};
  double word_length = 0.0;
  double vowel_count = 0.0;

  Vector to_vector(FeatureSet fs) const;
  friend bool operator==(const FeatureVector &, const FeatureVector &) = default;
};

// Read-only resources shared by featurization. Missing pieces fall back to
// zeros (frequencies, cosine) and the sentence norm (distance).
struct FeatureContext {
  const UnigramList *web = nullptr;
  const UnigramList *general = nullptr;
  const UnigramList *academic = nullptr;
  const EmbeddingTable *embeddings = nullptr;
  const LexiconTagger *tagger = nullptr;
};

std::size_t count_vowels(std::string_view word);

// `tokens` are normalized; empty strings are placeholders for tokens that
// normalized to nothing and are ignored for the sentence vector.
FeatureVector featurize_token(const std::vector<std::string> &tokens,
                              std::size_t index, const FeatureContext &ctx);
FeatureVector featurize(const IWIInstance &instance, const FeatureContext &ctx);

// Per-dimension z-scoring with population statistics. Zero-variance
// dimensions are centred but not scaled.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(Vector mean, Vector scale);

  static Standardizer fit(const std::vector<Vector> &rows);
  Vector apply(std::span<const double> row) const;

  const Vector &mean() const { return mean_; }
  const Vector &scale() const { return scale_; }
  std::size_t dim() const { return mean_.size(); }

 private:
  Vector mean_;
  Vector scale_;
};

struct IwiHyperparams {
  double c = 1.0;
  double gamma = 0.0;  // <= 0: 1 / (num_features * variance of standardized data)
  std::uint64_t seed = 0;
  double tolerance = 1e-3;
  std::size_t max_iterations = 100000;
};

class IwiModel {
 public:
  IwiModel() = default;
  IwiModel(FeatureSet fs, Standardizer scaler, RbfSvm svm, std::size_t train_informal,
           std::size_t train_formal);

  FeatureSet feature_set() const { return feature_set_; }
  const Standardizer &scaler() const { return scaler_; }
  const RbfSvm &svm() const { return svm_; }
  std::size_t train_informal() const { return train_informal_; }
  std::size_t train_formal() const { return train_formal_; }

  // Throws ArgumentError when the vector has the wrong dimension.
  double decision_value(std::span<const double> raw) const;
  // Informal iff the decision value is strictly positive.
  IwiLabel predict(std::span<const double> raw) const;
  IwiLabel predict(const FeatureVector &features) const;
  // Logistic squashing of the decision value.
  double informal_confidence(std::span<const double> raw) const;

 private:
  FeatureSet feature_set_ = FeatureSet::kFe1;
  Standardizer scaler_;
  RbfSvm svm_;
  std::size_t train_informal_ = 0;
  std::size_t train_formal_ = 0;
};

// Standardizes, sorts rows into a canonical order (so the result does not
// depend on input order) and fits the RBF classifier. Throws
// TrainingError when only one label is present.
IwiModel train_iwi(const std::vector<FeatureVector> &features,
                   const std::vector<IwiLabel> &labels, FeatureSet fs,
                   const IwiHyperparams &params);

// Lower-level entry point on already-projected rows.
IwiModel train_iwi_rows(const std::vector<Vector> &rows,
                        const std::vector<IwiLabel> &labels, FeatureSet fs,
                        const IwiHyperparams &params);

nlohmann::json iwi_model_to_json(const IwiModel &model);
IwiModel iwi_model_from_json(const nlohmann::json &j);
void save_iwi_model(const IwiModel &model, const std::string &path);
IwiModel load_iwi_model(const std::string &path);

// Precomputed feature rows: "label\tv1\t...\tvd" per line with '#'
// comments. All rows must share one dimension.
struct FeatureRows {
  std::vector<Vector> rows;
  std::vector<IwiLabel> labels;
};

FeatureRows load_feature_rows(const std::string &path);
std::string format_feature_rows(const FeatureRows &data);

// Predicts by seeded sampling from the training label distribution.
class StratifiedBaseline {
 public:
  StratifiedBaseline(double informal_fraction, std::uint64_t seed);

  double informal_fraction() const { return informal_fraction_; }
  IwiLabel next();
  std::vector<IwiLabel> predict(std::size_t count);

 private:
  double informal_fraction_;
  std::mt19937_64 rng_;
};

StratifiedBaseline stratified_baseline(const std::vector<IwiLabel> &train_labels,
                                       std::uint64_t seed);

// Informal is the positive class. Zero denominators give 0.
struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

// Throws ArgumentError for empty or mismatched inputs.
PrfScores evaluate(const std::vector<IwiLabel> &predicted,
                   const std::vector<IwiLabel> &gold);

}  // namespace acadaid

#endif  // ACADAID_IWI_H_
