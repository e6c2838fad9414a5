#ifndef ACADAID_SVM_H_
#define ACADAID_SVM_H_

#include <cstddef>
#include <span>
#include <vector>

#include "acadaid/embedding.h"

namespace acadaid {

struct SvmParams {
  double c = 1.0;
  double gamma = 0.0;  // must be > 0 when training
  double tolerance = 1e-3;
  std::size_t max_iterations = 100000;
  std::size_t cache_bytes = std::size_t{256} << 20;
};

// Binary C-SVM with the RBF kernel exp(-gamma * |a - b|^2). Labels are +1
// and -1; decision(x) > 0 means +1.
class RbfSvm {
 public:
  RbfSvm() = default;
  RbfSvm(std::vector<Vector> support_vectors, std::vector<double> coefficients,
         double bias, double gamma);

  // sum_i coef_i * K(sv_i, x) + bias
  double decision(std::span<const double> x) const;

  const std::vector<Vector> &support_vectors() const { return support_vectors_; }
  const std::vector<double> &coefficients() const { return coefficients_; }
  double bias() const { return bias_; }
  double gamma() const { return gamma_; }
  std::size_t dim() const {
    return support_vectors_.empty() ? 0 : support_vectors_.front().size();
  }

 private:
  std::vector<Vector> support_vectors_;
  std::vector<double> coefficients_;  // alpha_i * y_i
  double bias_ = 0.0;
  double gamma_ = 1.0;
};

struct SvmSolution {
  RbfSvm model;
  std::vector<double> alpha;  // dual variables, aligned with the input rows
  double bias = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

// Sequential minimal optimization on the dual, choosing the working pair by
// maximal violation for the first index and second-order gain for the
// second. Stops when the violation gap drops below `tolerance` or after
// `max_iterations` pair updates. Throws ArgumentError for inconsistent input
// and TrainingError when only one class is present.
SvmSolution train_rbf_svm(const std::vector<Vector> &x, const std::vector<int> &y,
                          const SvmParams &params);

}  // namespace acadaid

#endif  // ACADAID_SVM_H_
