// commands.hpp
// The operations behind `bellopt run|sweep|verify|sg3`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellopt/observable_search.hpp"
#include "bellopt/records.hpp"

namespace bellopt {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 12;  // dense LP columns grow as N^4
inline constexpr double kVerifyTolerance = 1e-6;
inline constexpr double kSweepSlack = 1e-4;

enum class ExitCode : int { success = 0, usage = 1, integrity = 2 };

enum class Command { run, sweep, verify, sg3 };

struct RunConfig {
  Command command = Command::run;
  int n = 2;
  int n_min = 2;
  int n_max = 9;
  ObservableFamily model = ObservableFamily::multiport;
  int restarts = 20;
  std::uint64_t seed = 42;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
  std::string input_path;   // verify only

  // Throws UsageError on out-of-range dimensions or restarts.
  void validate() const;
  AmoebaConfig amoeba(std::uint64_t run_seed) const;
};

// Per-N sweep seed: base ^ (N * 0x9E3779B97F4A7C15).
std::uint64_t sweep_seed(std::uint64_t base, int n);

ResultRecord cmd_run(const RunConfig& cfg);

struct SweepOutcome {
  std::vector<ResultRecord> records;
  // Monotonicity or separability-bound violations, one line each.
  std::vector<std::string> violations;
};

SweepOutcome cmd_sweep(const RunConfig& cfg);

// Monotone increase of f_max with slack kSweepSlack and f_max < N/(N+1).
std::vector<std::string> check_sweep(const std::vector<ResultRecord>& records);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> lines;  // one per record
};

// Rebuilds each record's table from its stored settings and re-solves the
// threshold LP. Throws UsageError on an unreadable or empty file.
VerifyReport cmd_verify(const std::string& path);
VerifyReport verify_records(const std::vector<ResultRecord>& records);

ResultRecord cmd_sg3(const RunConfig& cfg);

}  // namespace bellopt
