// Shared helpers for the unit and acceptance tests. The oracle functions
// here recompute results from first principles and deliberately avoid the
// library's own code paths.
#ifndef ACADAID_TESTS_SUPPORT_H_
#define ACADAID_TESTS_SUPPORT_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace testing {

inline std::string source_path(const std::string &rel) {
  return std::string(ACADAID_SOURCE_DIR) + "/" + rel;
}
inline std::string toy(const std::string &name) { return source_path("data/toy/" + name); }
inline std::string cli_path() { return ACADAID_CLI; }

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("acadaid-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  std::string str() const { return path_.string(); }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Runs a shell command and returns its exit status (-1 if it did not exit).
inline int run(const std::string &command) {
  int rc = std::system(command.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -1;
}

// ---- TF-IDF oracle -------------------------------------------------------

// Raw-count tf with smoothed idf ln((1 + N) / (1 + df)) + 1.
inline double tfidf_oracle(double tf, double df, double n) {
  return tf * (std::log((1.0 + n) / (1.0 + df)) + 1.0);
}

using Doc = std::vector<std::string>;

inline std::string window(const Doc &doc, std::size_t start, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += doc[start + i];
  }
  return s;
}

// Every n-gram string with n in [1, max_n], counted by sliding a window.
inline std::map<std::string, std::uint64_t> count_windows(const std::vector<Doc> &docs,
                                                           int max_n) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto &d : docs) {
    for (int n = 1; n <= max_n; ++n) {
      for (std::size_t i = 0; i + n <= d.size(); ++i) ++counts[window(d, i, n)];
    }
  }
  return counts;
}

inline int order_of(const std::string &phrase) {
  return 1 + static_cast<int>(std::count(phrase.begin(), phrase.end(), ' '));
}

inline std::uint64_t total_windows(const std::vector<Doc> &docs, int n) {
  std::uint64_t t = 0;
  for (const auto &d : docs) {
    if (d.size() >= static_cast<std::size_t>(n)) t += d.size() - n + 1;
  }
  return t;
}

// ---- Ratio filter oracle -------------------------------------------------

// Kept phrases under the rule: target count >= min_count, and the contrast
// count is zero or (a / Ta) / (b / Tb) >= num / den. The comparison is done
// in exact integer arithmetic.
inline std::set<std::string> ratio_oracle(const std::vector<Doc> &target,
                                          const std::vector<Doc> &contrast, int max_n,
                                          std::uint64_t num, std::uint64_t den,
                                          std::uint64_t min_count, std::uint64_t scale = 1) {
  auto a_counts = count_windows(target, max_n);
  auto b_counts = count_windows(contrast, max_n);
  std::set<std::string> kept;
  for (const auto &[phrase, a_raw] : a_counts) {
    int n = order_of(phrase);
    std::uint64_t a = a_raw * scale;
    if (a < min_count) continue;
    std::uint64_t b = b_counts.count(phrase) ? b_counts.at(phrase) * scale : 0;
    if (b == 0) {
      kept.insert(phrase);
      continue;
    }
    unsigned __int128 ta = total_windows(target, n) * scale;
    unsigned __int128 tb = total_windows(contrast, n) * scale;
    unsigned __int128 lhs = static_cast<unsigned __int128>(a) * tb * den;
    unsigned __int128 rhs = static_cast<unsigned __int128>(b) * ta * num;
    if (lhs >= rhs) kept.insert(phrase);
  }
  return kept;
}

// ---- Ranking oracles -----------------------------------------------------

// Rank of candidate i among four: one plus the number of candidates that
// precede it (higher score, or equal score and smaller word).
inline std::size_t rank_of(const std::array<double, 4> &scores,
                           const std::array<std::string, 4> &words, std::size_t i) {
  std::size_t r = 1;
  for (std::size_t j = 0; j < 4; ++j) {
    if (j == i) continue;
    if (scores[j] > scores[i] || (scores[j] == scores[i] && words[j] < words[i])) ++r;
  }
  return r;
}

// Reciprocal rank via enumeration of all 24 orderings: the unique ordering
// consistent with the score/word precedence is found by brute force.
inline double reciprocal_rank_bruteforce(const std::array<double, 4> &scores,
                                         const std::array<std::string, 4> &words,
                                         const std::array<int, 4> &relevance) {
  std::array<std::size_t, 4> perm = {0, 1, 2, 3};
  do {
    bool consistent = true;
    for (std::size_t a = 0; a + 1 < 4 && consistent; ++a) {
      std::size_t i = perm[a], j = perm[a + 1];
      bool ok = scores[i] > scores[j] || (scores[i] == scores[j] && words[i] < words[j]);
      consistent = ok;
    }
    if (!consistent) continue;
    for (std::size_t pos = 0; pos < 4; ++pos) {
      if (relevance[perm[pos]] > 0) return 1.0 / static_cast<double>(pos + 1);
    }
    return 0.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return -1.0;  // unreachable for distinct words
}

// ---- Classification oracle -----------------------------------------------

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Positive class is "informal" (encoded as true).
inline Confusion confusion(const std::vector<bool> &pred, const std::vector<bool> &gold) {
  Confusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] && gold[i]) ++c.tp;
    else if (pred[i] && !gold[i]) ++c.fp;
    else if (!pred[i] && gold[i]) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace testing

#endif  // ACADAID_TESTS_SUPPORT_H_
