#include "acadaid/svm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>

#include "acadaid/error.h"

namespace acadaid {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    d += diff * diff;
  }
  return std::exp(-gamma * d);
}

RbfSvm::RbfSvm(std::vector<Vector> support_vectors, std::vector<double> coefficients,
               double bias, double gamma)
    : support_vectors_(std::move(support_vectors)),
      coefficients_(std::move(coefficients)),
      bias_(bias),
      gamma_(gamma) {
  if (support_vectors_.size() != coefficients_.size()) {
    throw ArgumentError("support vector and coefficient counts differ");
  }
}

double RbfSvm::decision(std::span<const double> x) const {
  double sum = bias_;
  for (std::size_t i = 0; i < support_vectors_.size(); ++i) {
    sum += coefficients_[i] * rbf_kernel(support_vectors_[i], x, gamma_);
  }
  return sum;
}

namespace {

// Rows of Q_ij = y_i y_j K(x_i, x_j), computed on demand and kept in an
// LRU cache.
class KernelRows {
 public:
  KernelRows(const std::vector<Vector> &x, const std::vector<int> &y, double gamma,
             std::size_t cache_bytes)
      : x_(x), y_(y), gamma_(gamma), rows_(x.size()), where_(x.size()) {
    std::size_t row_bytes = std::max<std::size_t>(1, x.size() * sizeof(double));
    capacity_ = std::max<std::size_t>(2, cache_bytes / row_bytes);
  }

  const std::vector<double> &row(std::size_t i) {
    if (!rows_[i].empty()) {
      lru_.splice(lru_.begin(), lru_, where_[i]);
      return rows_[i];
    }
    if (lru_.size() >= capacity_) {
      std::size_t victim = lru_.back();
      lru_.pop_back();
      rows_[victim].clear();
      rows_[victim].shrink_to_fit();
    }
    auto &r = rows_[i];
    r.resize(x_.size());
    for (std::size_t j = 0; j < x_.size(); ++j) {
      r[j] = y_[i] * y_[j] * rbf_kernel(x_[i], x_[j], gamma_);
    }
    lru_.push_front(i);
    where_[i] = lru_.begin();
    return r;
  }

 private:
  const std::vector<Vector> &x_;
  const std::vector<int> &y_;
  double gamma_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::list<std::size_t>::iterator> where_;
  std::list<std::size_t> lru_;
  std::size_t capacity_;
};

constexpr double kTau = 1e-12;

}  // namespace

SvmSolution train_rbf_svm(const std::vector<Vector> &x, const std::vector<int> &y,
                          const SvmParams &params) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n) throw ArgumentError("training data and labels differ in size");
  if (!(params.c > 0)) throw ArgumentError("C must be positive");
  if (!(params.gamma > 0)) throw ArgumentError("gamma must be positive");
  const std::size_t dim = x.front().size();
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != dim) throw ArgumentError("training rows differ in dimension");
    if (y[i] == 1) {
      pos = true;
    } else if (y[i] == -1) {
      neg = true;
    } else {
      throw ArgumentError("labels must be +1 or -1");
    }
  }
  if (!pos || !neg) throw TrainingError("training data contains a single class");

  const double c = params.c;
  KernelRows q(x, y, params.gamma, params.cache_bytes);
  std::vector<double> diag(n, 1.0);  // K(x, x) = 1 for the RBF kernel
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);

  auto in_up = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] > 0) || (y[t] == -1 && alpha[t] < c);
  };

  SvmSolution sol;
  std::size_t iter = 0;
  for (; iter < params.max_iterations; ++iter) {
    // First index: maximal violation over I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    if (i == n) {
      sol.converged = true;
      break;
    }
    const auto &qi = q.row(i);
    // Second index: best second-order decrease over I_low.
    double gmin = std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      double v = -y[t] * grad[t];
      gmin = std::min(gmin, v);
      double b = gmax - v;
      if (b > 0) {
        double a = diag[i] + diag[t] - 2.0 * y[i] * y[t] * qi[t];
        if (a <= 0) a = kTau;
        double gain = -(b * b) / a;
        if (gain < best) {
          best = gain;
          j = t;
        }
      }
    }
    if (gmax - gmin < params.tolerance || j == n) {
      sol.converged = true;
      break;
    }
    const auto &qj = q.row(j);
    const auto &qi2 = q.row(i);  // row i may have been evicted by row j

    const double old_i = alpha[i], old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = diag[i] + diag[j] + 2.0 * qi2[j];
      if (quad <= 0) quad = kTau;
      double delta = (-grad[i] - grad[j]) / quad;
      double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = diag[i] + diag[j] - 2.0 * qi2[j];
      if (quad <= 0) quad = kTau;
      double delta = (grad[i] - grad[j]) / quad;
      double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi2[t] * di + qj[t] * dj;
  }
  sol.iterations = iter;

  // Offset from the free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      sum_free += yg;
      ++n_free;
    }
  }
  double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2;

  std::vector<Vector> sv;
  std::vector<double> coef;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) {
      sv.push_back(x[t]);
      coef.push_back(alpha[t] * y[t]);
    }
  }
  sol.alpha = std::move(alpha);
  sol.bias = -rho;
  sol.model = RbfSvm(std::move(sv), std::move(coef), -rho, params.gamma);
  return sol;
}

}  // namespace acadaid
