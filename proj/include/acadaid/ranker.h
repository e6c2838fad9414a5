#ifndef ACADAID_RANKER_H_
#define ACADAID_RANKER_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "acadaid/embedding.h"
#include "acadaid/lexsub.h"
#include "acadaid/resource.h"
#include "json.hpp"

namespace acadaid {

// Candidate feature layout:
//   0 is_academic, 1 log(1 + acad_rate), 2 log(1 + nonacad_rate),
//   3 log(acad_rate / nonacad_rate) clamped to +-kLogRatioClamp,
//   4 cos(candidate, sentence), 5 cos(candidate, target),
//   6 length, 7 vowel count
inline constexpr std::size_t kCandidateFeatures = 8;
inline constexpr double kLogRatioClamp = 10.0;

struct RankerContext {
  const Resource *resource = nullptr;
  const EmbeddingTable *embeddings = nullptr;
};

Vector candidate_features(const std::string &candidate, bool academic,
                          const std::vector<std::string> &sentence_tokens,
                          const std::string &target, const RankerContext &ctx);

struct FeaturizedGroup {
  std::array<std::string, kGroupSize> words;
  std::array<Vector, kGroupSize> features;
  std::array<int, kGroupSize> relevance{};

  bool has_relevant() const;
};

FeaturizedGroup featurize_group(const RankingGroup &group, const RankerContext &ctx);
std::vector<FeaturizedGroup> featurize_groups(const std::vector<RankingGroup> &groups,
                                              const RankerContext &ctx);

enum class RankLoss { kPairwiseLogistic, kSoftmax };
RankLoss parse_rank_loss(std::string_view name);
std::string_view rank_loss_name(RankLoss loss);

// Scores a candidate feature vector. With hidden = 0 the score is w.x (no
// bias, since a shared offset cannot change an in-group ordering);
// otherwise v.tanh(W x + b).
class RankerModel {
 public:
  RankerModel() = default;
  RankerModel(std::size_t input_dim, std::size_t hidden, RankLoss loss);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden() const { return hidden_; }
  RankLoss loss() const { return loss_; }
  std::vector<double> &params() { return params_; }
  const std::vector<double> &params() const { return params_; }
  std::vector<double> &accumulators() { return accum_; }
  const std::vector<double> &accumulators() const { return accum_; }

  double score(std::span<const double> x) const;
  // Adds scale * d(score)/d(params) into `grad`.
  void add_score_gradient(std::span<const double> x, double scale,
                          std::vector<double> &grad) const;

 private:
  std::size_t input_dim_ = 0;
  std::size_t hidden_ = 0;
  RankLoss loss_ = RankLoss::kPairwiseLogistic;
  std::vector<double> params_;
  std::vector<double> accum_;
};

// Seeded initial weights: zeros for the linear scorer, small normal draws
// for the hidden layer.
RankerModel init_ranker(std::size_t input_dim, std::size_t hidden, RankLoss loss,
                        std::uint64_t seed);

std::array<double, kGroupSize> score_group(const RankerModel &model,
                                           const FeaturizedGroup &group);
// Candidate indices by score desc, ties by word.
std::array<std::size_t, kGroupSize> rank_order(
    const std::array<double, kGroupSize> &scores,
    const std::array<std::string, kGroupSize> &words);

// Loss of one group given its scores, and d(loss)/d(score).
double group_loss(RankLoss loss, const std::array<double, kGroupSize> &scores,
                  const std::array<int, kGroupSize> &relevance,
                  std::array<double, kGroupSize> *dscores = nullptr);

// Mean loss over groups with a relevant candidate; gradient optional.
double batch_loss(const RankerModel &model, const std::vector<FeaturizedGroup> &groups,
                  std::vector<double> *grad = nullptr);

struct RankerTrainOptions {
  RankLoss loss = RankLoss::kPairwiseLogistic;
  std::size_t steps = 100;
  double learning_rate = 0.05;
  std::size_t hidden = 0;
  std::uint64_t seed = 0;
};

struct RankerTrainResult {
  RankerModel model;
  std::vector<double> losses;  // losses[t] is the objective before step t; last entry is final
  std::size_t skipped = 0;     // groups without a relevant candidate
};

// Full-batch Adagrad. Throws TrainingError naming the step when the loss
// stops being finite, and when no group has a relevant candidate.
RankerTrainResult train_ranker(const std::vector<FeaturizedGroup> &groups,
                               const RankerTrainOptions &options);

struct RankingMetrics {
  double mrr = 0.0;  // 0 when no group could be evaluated
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
};

// 1-based position of the first relevant candidate; 0 if there is none.
std::size_t first_relevant_rank(const std::array<double, kGroupSize> &scores,
                                const FeaturizedGroup &group);
RankingMetrics mrr(const RankerModel &model, const std::vector<FeaturizedGroup> &groups);

// Max over parameters of |analytic - numeric| / max(|analytic|, |numeric|, 1e-4),
// with central differences of step h.
double gradient_check(const RankerModel &model, const std::vector<FeaturizedGroup> &groups,
                      double h = 1e-5);

nlohmann::json ranker_to_json(const RankerModel &model);
RankerModel ranker_from_json(const nlohmann::json &j);
void save_ranker(const RankerModel &model, const std::string &path);
RankerModel load_ranker(const std::string &path);

}  // namespace acadaid

#endif  // ACADAID_RANKER_H_
