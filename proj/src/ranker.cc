#include "acadaid/ranker.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "acadaid/corpus.h"
#include "acadaid/error.h"
#include "acadaid/iwi.h"
#include "acadaid/text_util.h"

namespace acadaid {

using nlohmann::json;

namespace {

constexpr std::string_view kModelFormat = "acadaid-ranker-model";
constexpr int kModelVersion = 1;
constexpr double kAdagradEpsilon = 1e-8;

double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double log_ratio(double acad, double nonacad) {
  if (acad <= 0 && nonacad <= 0) return 0.0;
  if (nonacad <= 0) return kLogRatioClamp;
  if (acad <= 0) return -kLogRatioClamp;
  return std::clamp(std::log(acad / nonacad), -kLogRatioClamp, kLogRatioClamp);
}

}  // namespace

Vector candidate_features(const std::string &candidate, bool academic,
                          const std::vector<std::string> &sentence_tokens,
                          const std::string &target, const RankerContext &ctx) {
  Vector f(kCandidateFeatures, 0.0);
  f[0] = academic ? 1.0 : 0.0;
  if (ctx.resource) {
    auto tokens = normalize_tokens(candidate);
    if (!tokens.empty() && tokens.size() <= kMaxNgramOrder) {
      if (const ResourceEntry *e = ctx.resource->find(PhraseKey(tokens))) {
        f[1] = std::log1p(e->acad_rate);
        f[2] = std::log1p(e->nonacad_rate);
        f[3] = log_ratio(e->acad_rate, e->nonacad_rate);
      }
    }
  }
  if (ctx.embeddings) {
    auto cv = ctx.embeddings->find(candidate);
    if (!cv.empty()) {
      Vector c(cv.begin(), cv.end());
      std::vector<std::string> words;
      for (const auto &t : sentence_tokens) {
        if (!t.empty()) words.push_back(t);
      }
      if (auto sent = ctx.embeddings->mean(words)) f[4] = cosine(c, *sent);
      auto tv = ctx.embeddings->find(target);
      if (!tv.empty()) f[5] = cosine(c, Vector(tv.begin(), tv.end()));
    }
  }
  f[6] = static_cast<double>(candidate.size());
  f[7] = static_cast<double>(count_vowels(candidate));
  return f;
}

bool FeaturizedGroup::has_relevant() const {
  return std::any_of(relevance.begin(), relevance.end(), [](int r) { return r > 0; });
}

FeaturizedGroup featurize_group(const RankingGroup &group, const RankerContext &ctx) {
  std::vector<std::string> tokens;
  for (const auto &raw : group.instance.sentence) tokens.push_back(normalize_token(raw));
  FeaturizedGroup out;
  for (std::size_t i = 0; i < kGroupSize; ++i) {
    const auto &c = group.candidates[i];
    out.words[i] = c.word;
    out.relevance[i] = c.relevance;
    out.features[i] = candidate_features(c.word, c.academic, tokens,
                                         group.instance.target, ctx);
  }
  return out;
}

std::vector<FeaturizedGroup> featurize_groups(const std::vector<RankingGroup> &groups,
                                              const RankerContext &ctx) {
  std::vector<FeaturizedGroup> out;
  out.reserve(groups.size());
  for (const auto &g : groups) out.push_back(featurize_group(g, ctx));
  return out;
}

RankLoss parse_rank_loss(std::string_view name) {
  if (name == "logistic" || name == "pairwise_logistic") return RankLoss::kPairwiseLogistic;
  if (name == "softmax") return RankLoss::kSoftmax;
  throw ArgumentError("unknown loss '" + std::string(name) + "'");
}

std::string_view rank_loss_name(RankLoss loss) {
  return loss == RankLoss::kSoftmax ? "softmax" : "logistic";
}

RankerModel::RankerModel(std::size_t input_dim, std::size_t hidden, RankLoss loss)
    : input_dim_(input_dim), hidden_(hidden), loss_(loss) {
  std::size_t n = hidden == 0 ? input_dim : hidden * input_dim + 2 * hidden;
  params_.assign(n, 0.0);
  accum_.assign(n, 0.0);
}

// Hidden-layer parameter layout: W (hidden x input, row-major), b (hidden),
// v (hidden).
double RankerModel::score(std::span<const double> x) const {
  if (x.size() != input_dim_) {
    throw ArgumentError("ranker expects " + std::to_string(input_dim_) +
                        " features, got " + std::to_string(x.size()));
  }
  if (hidden_ == 0) return dot(params_, x);
  const double *w = params_.data();
  const double *b = w + hidden_ * input_dim_;
  const double *v = b + hidden_;
  double s = 0;
  for (std::size_t h = 0; h < hidden_; ++h) {
    double a = b[h];
    for (std::size_t k = 0; k < input_dim_; ++k) a += w[h * input_dim_ + k] * x[k];
    s += v[h] * std::tanh(a);
  }
  return s;
}

void RankerModel::add_score_gradient(std::span<const double> x, double scale,
                                     std::vector<double> &grad) const {
  if (hidden_ == 0) {
    for (std::size_t k = 0; k < input_dim_; ++k) grad[k] += scale * x[k];
    return;
  }
  const double *w = params_.data();
  const double *b = w + hidden_ * input_dim_;
  const double *v = b + hidden_;
  double *gw = grad.data();
  double *gb = gw + hidden_ * input_dim_;
  double *gv = gb + hidden_;
  for (std::size_t h = 0; h < hidden_; ++h) {
    double a = b[h];
    for (std::size_t k = 0; k < input_dim_; ++k) a += w[h * input_dim_ + k] * x[k];
    double t = std::tanh(a);
    gv[h] += scale * t;
    double da = scale * v[h] * (1 - t * t);
    gb[h] += da;
    for (std::size_t k = 0; k < input_dim_; ++k) gw[h * input_dim_ + k] += da * x[k];
  }
}

RankerModel init_ranker(std::size_t input_dim, std::size_t hidden, RankLoss loss,
                        std::uint64_t seed) {
  RankerModel model(input_dim, hidden, loss);
  if (hidden > 0) {
    std::mt19937_64 rng(seed);
    auto &p = model.params();
    const std::size_t nw = hidden * input_dim;
    for (std::size_t i = 0; i < nw; ++i) p[i] = 0.1 * standard_normal(rng);
    for (std::size_t i = nw + hidden; i < p.size(); ++i) p[i] = 0.1 * standard_normal(rng);
  }
  return model;
}

std::array<double, kGroupSize> score_group(const RankerModel &model,
                                           const FeaturizedGroup &group) {
  std::array<double, kGroupSize> s{};
  for (std::size_t i = 0; i < kGroupSize; ++i) s[i] = model.score(group.features[i]);
  return s;
}

std::array<std::size_t, kGroupSize> rank_order(
    const std::array<double, kGroupSize> &scores,
    const std::array<std::string, kGroupSize> &words) {
  std::array<std::size_t, kGroupSize> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return words[a] < words[b];
  });
  return order;
}

double group_loss(RankLoss loss, const std::array<double, kGroupSize> &scores,
                  const std::array<int, kGroupSize> &relevance,
                  std::array<double, kGroupSize> *dscores) {
  std::array<double, kGroupSize> d{};
  double value = 0;
  if (loss == RankLoss::kPairwiseLogistic) {
    for (std::size_t i = 0; i < kGroupSize; ++i) {
      for (std::size_t j = 0; j < kGroupSize; ++j) {
        if (relevance[i] <= relevance[j]) continue;
        double z = scores[j] - scores[i];
        value += softplus(z);
        double g = sigmoid(z);
        d[i] -= g;
        d[j] += g;
      }
    }
  } else {
    double total = 0;
    for (int r : relevance) total += r;
    double mx = *std::max_element(scores.begin(), scores.end());
    double z = 0;
    for (double s : scores) z += std::exp(s - mx);
    double log_z = mx + std::log(z);
    for (std::size_t i = 0; i < kGroupSize; ++i) {
      double p = total > 0 ? relevance[i] / total : 0.0;
      value -= p * (scores[i] - log_z);
      d[i] = std::exp(scores[i] - log_z) - p;
    }
  }
  if (dscores) *dscores = d;
  return value;
}

double batch_loss(const RankerModel &model, const std::vector<FeaturizedGroup> &groups,
                  std::vector<double> *grad) {
  if (grad) grad->assign(model.params().size(), 0.0);
  double total = 0;
  std::size_t used = 0;
  std::array<double, kGroupSize> d{};
  for (const auto &g : groups) {
    if (!g.has_relevant()) continue;
    auto scores = score_group(model, g);
    total += group_loss(model.loss(), scores, g.relevance, grad ? &d : nullptr);
    ++used;
    if (grad) {
      for (std::size_t i = 0; i < kGroupSize; ++i) {
        if (d[i] != 0) model.add_score_gradient(g.features[i], d[i], *grad);
      }
    }
  }
  if (used == 0) return 0.0;
  const double inv = 1.0 / static_cast<double>(used);
  if (grad) {
    for (auto &x : *grad) x *= inv;
  }
  return total * inv;
}

RankerTrainResult train_ranker(const std::vector<FeaturizedGroup> &groups,
                               const RankerTrainOptions &options) {
  if (options.steps == 0) throw ArgumentError("steps must be at least 1");
  if (!(options.learning_rate > 0)) throw ArgumentError("learning rate must be positive");
  RankerTrainResult result;
  std::size_t dim = 0;
  for (const auto &g : groups) {
    if (!g.has_relevant()) {
      ++result.skipped;
      continue;
    }
    if (dim == 0) dim = g.features[0].size();
  }
  if (dim == 0) throw TrainingError("no group has a relevant candidate");

  result.model = init_ranker(dim, options.hidden, options.loss, options.seed);
  auto &params = result.model.params();
  auto &accum = result.model.accumulators();
  std::vector<double> grad;
  for (std::size_t step = 0; step < options.steps; ++step) {
    double loss = batch_loss(result.model, groups, &grad);
    bool finite = std::isfinite(loss) &&
                  std::all_of(grad.begin(), grad.end(), [](double g) { return std::isfinite(g); });
    if (!finite) {
      throw TrainingError("loss is not finite at step " + std::to_string(step + 1));
    }
    result.losses.push_back(loss);
    for (std::size_t k = 0; k < params.size(); ++k) {
      accum[k] += grad[k] * grad[k];
      params[k] -= options.learning_rate * grad[k] / std::sqrt(accum[k] + kAdagradEpsilon);
    }
  }
  double final_loss = batch_loss(result.model, groups);
  if (!std::isfinite(final_loss)) {
    throw TrainingError("loss is not finite after step " + std::to_string(options.steps));
  }
  result.losses.push_back(final_loss);
  return result;
}

std::size_t first_relevant_rank(const std::array<double, kGroupSize> &scores,
                                const FeaturizedGroup &group) {
  auto order = rank_order(scores, group.words);
  for (std::size_t pos = 0; pos < kGroupSize; ++pos) {
    if (group.relevance[order[pos]] > 0) return pos + 1;
  }
  return 0;
}

RankingMetrics mrr(const RankerModel &model, const std::vector<FeaturizedGroup> &groups) {
  RankingMetrics m;
  double sum = 0;
  for (const auto &g : groups) {
    std::size_t rank = first_relevant_rank(score_group(model, g), g);
    if (rank == 0) {
      ++m.excluded;
      continue;
    }
    sum += 1.0 / static_cast<double>(rank);
    ++m.evaluated;
  }
  if (m.evaluated > 0) m.mrr = sum / static_cast<double>(m.evaluated);
  return m;
}

double gradient_check(const RankerModel &model, const std::vector<FeaturizedGroup> &groups,
                      double h) {
  std::vector<double> analytic;
  batch_loss(model, groups, &analytic);
  RankerModel probe = model;
  double worst = 0;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    const double orig = probe.params()[k];
    probe.params()[k] = orig + h;
    double up = batch_loss(probe, groups);
    probe.params()[k] = orig - h;
    double down = batch_loss(probe, groups);
    probe.params()[k] = orig;
    double numeric = (up - down) / (2 * h);
    double denom = std::max({std::abs(analytic[k]), std::abs(numeric), 1e-4});
    worst = std::max(worst, std::abs(analytic[k] - numeric) / denom);
  }
  return worst;
}

json ranker_to_json(const RankerModel &model) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["loss"] = rank_loss_name(model.loss());
  j["input_dim"] = model.input_dim();
  j["hidden"] = model.hidden();
  j["params"] = model.params();
  j["accumulators"] = model.accumulators();
  return j;
}

RankerModel ranker_from_json(const json &j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw ArgumentError("not a ranker model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw ArgumentError("unsupported ranker model version");
    }
    RankerModel model(j.at("input_dim").get<std::size_t>(), j.at("hidden").get<std::size_t>(),
                      parse_rank_loss(j.at("loss").get<std::string>()));
    auto params = j.at("params").get<std::vector<double>>();
    auto accum = j.at("accumulators").get<std::vector<double>>();
    if (params.size() != model.params().size() || accum.size() != params.size()) {
      throw ArgumentError("ranker parameter count does not match its shape");
    }
    model.params() = std::move(params);
    model.accumulators() = std::move(accum);
    return model;
  } catch (const json::exception &e) {
    throw ArgumentError(std::string("malformed ranker model: ") + e.what());
  }
}

void save_ranker(const RankerModel &model, const std::string &path) {
  write_file(path, ranker_to_json(model).dump(1) + "\n");
}

RankerModel load_ranker(const std::string &path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error &e) {
    throw ParseError(path, 1, std::string("malformed JSON: ") + e.what());
  }
  return ranker_from_json(j);
}

}  // namespace acadaid
