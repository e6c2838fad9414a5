#ifndef ACADAID_EMBEDDING_H_
#define ACADAID_EMBEDDING_H_

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace acadaid {

using Vector = std::vector<double>;

// Static word vectors loaded from a "word v1 ... vd" text file.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // Throws ParseError (dimension mismatch, bad number, empty file) or
  // IoError.
  static EmbeddingTable load(const std::string &path);

  // Throws ArgumentError on dimension mismatch.
  void add(const std::string &word, std::span<const float> values);
  void add(const std::string &word, std::span<const double> values);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }
  bool contains(const std::string &word) const { return index_.count(word) > 0; }

  // Null span for out-of-vocabulary words.
  std::span<const float> find(const std::string &word) const;

  // Mean of the in-vocabulary vectors; nullopt when none are known.
  std::optional<Vector> mean(std::span<const std::string> tokens) const;

  // Copy with every vector multiplied by `factor`.
  EmbeddingTable scaled(double factor) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
// 0 when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);
double euclidean(std::span<const double> a, std::span<const double> b);

}  // namespace acadaid

#endif  // ACADAID_EMBEDDING_H_
