#include "acadaid/corpus.h"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <thread>

#include "acadaid/error.h"
#include "acadaid/text_util.h"
#include "json.hpp"

namespace acadaid {

namespace fs = std::filesystem;

std::string_view domain_name(Domain domain) {
  return domain == Domain::kAcademic ? "academic" : "nonacademic";
}

Corpus::Corpus(Domain domain, std::vector<Document> documents)
    : domain_(domain), documents_(std::move(documents)) {
  for (auto &doc : documents_) {
    doc.source = domain_;
    token_count_ += doc.tokens.size();
  }
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "one-doc-per-file") return CorpusFormat::kOneDocPerFile;
  if (name == "one-doc-per-line") return CorpusFormat::kOneDocPerLine;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw ArgumentError("unknown corpus format '" + std::string(name) + "'");
}

static bool keep_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '\'' || c == '-';
}

std::string normalize_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (!keep_char(c)) continue;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> normalize_tokens(std::string_view raw_text) {
  std::vector<std::string> tokens;
  for (auto piece : split_whitespace(raw_text)) {
    std::string token = normalize_token(piece);
    if (!token.empty()) tokens.push_back(std::move(token));
  }
  return tokens;
}

namespace {

struct RawDocument {
  std::string id;
  std::string text;
};

std::vector<Document> normalize_all(std::vector<RawDocument> raw,
                                    unsigned threads) {
  std::vector<Document> docs(raw.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      docs[i].id = std::move(raw[i].id);
      docs[i].tokens = normalize_tokens(raw[i].text);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, raw.size()));
  if (threads <= 1) {
    work(0, raw.size());
    return docs;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (raw.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(raw.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  for (auto &th : pool) th.join();
  return docs;
}

bool is_blank(std::string_view line) {
  return split_whitespace(line).empty();
}

}  // namespace

Corpus load_corpus(const std::string &path, CorpusFormat format,
                   Domain domain, unsigned threads) {
  std::vector<RawDocument> raw;
  if (format == CorpusFormat::kOneDocPerFile) {
    std::error_code ec;
    if (!fs::is_directory(path, ec)) {
      throw IoError("'" + path + "' is not a readable directory");
    }
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto &file : files) {
      std::string text = read_file(file.string());
      if (!is_valid_utf8(text)) {
        throw ParseError(file.string(), 1, "invalid UTF-8");
      }
      raw.push_back({file.filename().string(), std::move(text)});
    }
  } else {
    std::vector<std::string> lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string &line = lines[i];
      if (!is_valid_utf8(line)) throw ParseError(path, i + 1, "invalid UTF-8");
      if (is_blank(line)) continue;
      if (format == CorpusFormat::kOneDocPerLine) {
        raw.push_back({std::to_string(i + 1), line});
        continue;
      }
      nlohmann::json record;
      try {
        record = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path, i + 1, std::string("malformed JSON: ") + e.what());
      }
      if (!record.is_object() || !record.contains("id") ||
          !record.contains("text") || !record["id"].is_string() ||
          !record["text"].is_string()) {
        throw ParseError(path, i + 1,
                         "record needs string fields \"id\" and \"text\"");
      }
      raw.push_back({record["id"].get<std::string>(),
                     record["text"].get<std::string>()});
    }
  }
  return Corpus(domain, normalize_all(std::move(raw), threads));
}

Corpus downsample(const Corpus &corpus, std::uint64_t target_tokens,
                  std::uint64_t seed) {
  const auto &docs = corpus.documents();
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with the portable index sampler.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }
  std::vector<Document> taken;
  std::uint64_t tokens = 0;
  for (std::size_t idx : order) {
    if (tokens >= target_tokens) break;
    taken.push_back(docs[idx]);
    tokens += docs[idx].tokens.size();
  }
  return Corpus(corpus.domain(), std::move(taken));
}

}  // namespace acadaid
