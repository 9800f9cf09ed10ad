#include "bellopt/records.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bellopt/errors.hpp"

namespace bellopt {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view field, const char* name, std::size_t line) {
  field = trim(field);
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw UsageError("line " + std::to_string(line) + ": cannot parse " + name + " from '" +
                     std::string(field) + "'");
  }
  return value;
}

}  // namespace

OutputFormat format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw UsageError("unknown output format '" + name + "'");
}

ResultRecord make_record(const SearchResult& result, double wall_time_seconds) {
  ResultRecord r;
  r.n = dimension_of(result.best_settings);
  r.model = to_string(family_of(result.best_settings));
  r.f_max = result.best_f;
  r.separability_bound = separability_bound(r.n);
  r.evaluations = result.evaluations;
  r.lp_solves = result.lp_solves;
  r.wall_time_seconds = wall_time_seconds;
  r.seed = result.seed;
  r.settings = flatten_settings(result.best_settings);
  return r;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const std::vector<ResultRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.n) + ',' + r.model + ',' + format_real(r.f_max) + ',' +
           format_real(r.separability_bound) + ',' + std::to_string(r.evaluations) + ',' +
           std::to_string(r.lp_solves) + ',' + format_real(r.wall_time_seconds) + ',' +
           std::to_string(r.seed) + ',';
    for (std::size_t i = 0; i < r.settings.size(); ++i) {
      if (i) out += ';';
      out += format_real(r.settings[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<ResultRecord> parse_csv(std::string_view text) {
  std::vector<ResultRecord> out;
  const auto lines = split(text, '\n');
  bool header_seen = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = trim(lines[ln]);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw UsageError("unexpected CSV header: " + std::string(line));
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw UsageError("line " + std::to_string(ln + 1) + ": expected 9 fields, got " +
                       std::to_string(f.size()));
    }
    ResultRecord r;
    r.n = parse_number<int>(f[0], "n", ln + 1);
    r.model = std::string(trim(f[1]));
    r.f_max = parse_number<double>(f[2], "f_max", ln + 1);
    r.separability_bound = parse_number<double>(f[3], "separability_bound", ln + 1);
    r.evaluations = parse_number<std::int64_t>(f[4], "evaluations", ln + 1);
    r.lp_solves = parse_number<std::int64_t>(f[5], "lp_solves", ln + 1);
    r.wall_time_seconds = parse_number<double>(f[6], "wall_time_seconds", ln + 1);
    r.seed = parse_number<std::uint64_t>(f[7], "seed", ln + 1);
    if (!trim(f[8]).empty()) {
      for (auto s : split(trim(f[8]), ';')) r.settings.push_back(parse_number<double>(s, "settings", ln + 1));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_json(const std::vector<ResultRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"n", r.n},
                   {"model", r.model},
                   {"f_max", r.f_max},
                   {"separability_bound", r.separability_bound},
                   {"evaluations", r.evaluations},
                   {"lp_solves", r.lp_solves},
                   {"wall_time_seconds", r.wall_time_seconds},
                   {"seed", r.seed},
                   {"settings", r.settings}});
  }
  return arr.dump(2) + "\n";
}

std::vector<ResultRecord> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
  if (doc.is_object()) doc = nlohmann::json::array({doc});
  if (!doc.is_array()) throw UsageError("JSON records must be an array of objects");
  std::vector<ResultRecord> out;
  try {
    for (const auto& j : doc) {
      ResultRecord r;
      r.n = j.at("n").get<int>();
      r.model = j.at("model").get<std::string>();
      r.f_max = j.at("f_max").get<double>();
      r.separability_bound = j.at("separability_bound").get<double>();
      r.evaluations = j.at("evaluations").get<std::int64_t>();
      r.lp_solves = j.at("lp_solves").get<std::int64_t>();
      r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.settings = j.at("settings").get<std::vector<double>>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad JSON record: ") + e.what());
  }
  return out;
}

std::vector<ResultRecord> parse_records(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) return {};
  if (body.front() == '[' || body.front() == '{') return parse_json(body);
  return parse_csv(body);
}

void write_records(std::ostream& out, const std::vector<ResultRecord>& records,
                   OutputFormat format) {
  out << (format == OutputFormat::csv ? to_csv(records) : to_json(records));
}

void write_records(const std::string& path, const std::vector<ResultRecord>& records,
                   OutputFormat format) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  write_records(f, records, format);
  if (!f) throw UsageError("failed writing '" + path + "'");
}

std::vector<ResultRecord> read_records(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_records(ss.str());
}

}  // namespace bellopt
