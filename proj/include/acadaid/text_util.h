#ifndef ACADAID_TEXT_UTIL_H_
#define ACADAID_TEXT_UTIL_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace acadaid {

// Splits on every occurrence of `sep`; empty fields are kept.
std::vector<std::string_view> split(std::string_view text, char sep);

// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string_view> split_whitespace(std::string_view text);

std::string join(const std::vector<std::string> &parts, std::string_view sep);

// Shortest representation that parses back to the identical double.
// Infinities are written as "inf" / "-inf".
std::string format_double(double value);

// Fixed-precision formatting for human-facing reports.
std::string format_fixed(double value, int precision);

// Strict parsers: the whole field must be consumed. `source` and `line`
// are used for the error message.
double parse_double(std::string_view field, const std::string &source,
                    std::size_t line);
std::int64_t parse_int(std::string_view field, const std::string &source,
                       std::size_t line);

bool is_valid_utf8(std::string_view text);

// Whole-file helpers. Throw IoError.
std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view content);
std::vector<std::string> read_lines(const std::string &path);

// Portable random helpers on top of mt19937_64. The standard distributions
// are implementation-defined, so seeded outputs go through these instead.
double uniform_unit(std::mt19937_64 &rng);              // [0, 1)
std::size_t uniform_index(std::mt19937_64 &rng, std::size_t bound);  // [0, bound)
double standard_normal(std::mt19937_64 &rng);

}  // namespace acadaid

#endif  // ACADAID_TEXT_UTIL_H_
