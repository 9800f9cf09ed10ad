// records.hpp
// Result records and their CSV / JSON file formats.
//
// CSV header (fixed column order):
//   n,model,f_max,separability_bound,evaluations,lp_solves,wall_time_seconds,seed,settings
// Reals are written with 17 significant digits; `settings` is the
// semicolon-joined flattened setting angles in radians. JSON files hold an
// array of objects with the same field names, `settings` as a number array.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bellopt/observable_search.hpp"

namespace bellopt {

enum class OutputFormat { csv, json };

OutputFormat format_from_string(const std::string& name);

struct ResultRecord {
  int n = 0;
  std::string model;
  double f_max = 0.0;
  double separability_bound = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t lp_solves = 0;
  double wall_time_seconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> settings;

  bool operator==(const ResultRecord&) const = default;
};

// N / (N + 1): the noise fraction above which the isotropic state is separable.
inline double separability_bound(int n) { return static_cast<double>(n) / (n + 1); }

ResultRecord make_record(const SearchResult& result, double wall_time_seconds);

inline constexpr std::string_view kCsvHeader =
    "n,model,f_max,separability_bound,evaluations,lp_solves,wall_time_seconds,seed,settings";

std::string format_real(double x);

std::string to_csv(const std::vector<ResultRecord>& records);
std::string to_json(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_csv(std::string_view text);
std::vector<ResultRecord> parse_json(std::string_view text);

// Picks the parser from the first non-blank character ('[' or '{' -> JSON).
std::vector<ResultRecord> parse_records(std::string_view text);

void write_records(std::ostream& out, const std::vector<ResultRecord>& records,
                   OutputFormat format);
void write_records(const std::string& path, const std::vector<ResultRecord>& records,
                   OutputFormat format);
std::vector<ResultRecord> read_records(const std::string& path);

}  // namespace bellopt
