#include "acadaid/embedding.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "acadaid/error.h"
#include "acadaid/text_util.h"

namespace acadaid {

EmbeddingTable EmbeddingTable::load(const std::string &path) {
  EmbeddingTable table;
  std::string content = read_file(path);
  std::size_t line_no = 0;
  std::size_t start = 0;
  std::vector<float> values;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string_view line(content.data() + start, end - start);
    start = end + 1;
    ++line_no;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw ParseError(path, line_no, "row has no vector values");
    }
    values.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      float v = 0;
      auto f = fields[i];
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError(path, line_no,
                         "invalid number '" + std::string(f) + "'");
      }
      values.push_back(v);
    }
    if (table.dim_ != 0 && values.size() != table.dim_) {
      throw ParseError(path, line_no,
                       "expected " + std::to_string(table.dim_) +
                           " values, found " + std::to_string(values.size()));
    }
    table.add(std::string(fields[0]), values);
  }
  if (table.empty()) throw ParseError(path, line_no, "empty embedding file");
  return table;
}

void EmbeddingTable::add(const std::string &word,
                         std::span<const float> values) {
  if (values.empty()) throw ArgumentError("empty vector for '" + word + "'");
  if (dim_ == 0) dim_ = values.size();
  if (values.size() != dim_) {
    throw ArgumentError("vector for '" + word + "' has dimension " +
                        std::to_string(values.size()) + ", table has " +
                        std::to_string(dim_));
  }
  auto it = index_.find(word);
  if (it != index_.end()) {
    std::copy(values.begin(), values.end(), data_.begin() + it->second * dim_);
    return;
  }
  index_.emplace(word, index_.size());
  data_.insert(data_.end(), values.begin(), values.end());
}

void EmbeddingTable::add(const std::string &word,
                         std::span<const double> values) {
  std::vector<float> copy(values.begin(), values.end());
  add(word, std::span<const float>(copy));
}

std::span<const float> EmbeddingTable::find(const std::string &word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return {};
  return std::span<const float>(data_.data() + it->second * dim_, dim_);
}

std::optional<Vector> EmbeddingTable::mean(
    std::span<const std::string> tokens) const {
  Vector sum(dim_, 0.0);
  std::size_t known = 0;
  for (const auto &token : tokens) {
    auto v = find(token);
    if (v.empty()) continue;
    for (std::size_t i = 0; i < dim_; ++i) sum[i] += v[i];
    ++known;
  }
  if (known == 0) return std::nullopt;
  for (auto &x : sum) x /= static_cast<double>(known);
  return sum;
}

EmbeddingTable EmbeddingTable::scaled(double factor) const {
  EmbeddingTable out = *this;
  for (auto &x : out.data_) x = static_cast<float>(x * factor);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  double c = dot(a, b) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace acadaid
