#include "bellopt/commands.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "bellopt/errors.hpp"
#include "bellopt/lhv_solver.hpp"
#include "bellopt/records.hpp"

namespace bellopt {

namespace {

void require_dim(int n, const char* flag) {
  if (n < kMinDim || n > kMaxDim) {
    throw UsageError(std::string(flag) + " must lie in [" + std::to_string(kMinDim) + ", " +
                     std::to_string(kMaxDim) + "], got " + std::to_string(n));
  }
}

ResultRecord timed_search(ObservableFamily family, int n, const AmoebaConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const SearchResult result = optimize(family, n, cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ResultRecord rec = make_record(result, wall);
  if (!(rec.f_max < rec.separability_bound)) {
    throw IntegrityError("f_max " + format_real(rec.f_max) +
                         " is not below the separability bound " +
                         format_real(rec.separability_bound));
  }
  return rec;
}

}  // namespace

void RunConfig::validate() const {
  if (restarts < 1) throw UsageError("--restarts must be >= 1");
  switch (command) {
    case Command::run:
      require_dim(n, "--n");
      break;
    case Command::sweep:
      require_dim(n_min, "--n-min");
      require_dim(n_max, "--n-max");
      if (n_min > n_max) throw UsageError("--n-min must not exceed --n-max");
      break;
    case Command::verify:
      if (input_path.empty()) throw UsageError("verify needs a records file");
      break;
    case Command::sg3:
      break;
  }
}

AmoebaConfig RunConfig::amoeba(std::uint64_t run_seed) const {
  AmoebaConfig a;
  a.restarts = restarts;
  a.seed = run_seed;
  return a;
}

std::uint64_t sweep_seed(std::uint64_t base, int n) {
  return base ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL);
}

ResultRecord cmd_run(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.command = Command::run;
  c.validate();
  if (c.model == ObservableFamily::stern_gerlach) {
    throw UsageError("use the sg3 command for the Stern-Gerlach scenario");
  }
  return timed_search(c.model, c.n, c.amoeba(c.seed));
}

SweepOutcome cmd_sweep(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.command = Command::sweep;
  c.validate();
  if (c.model == ObservableFamily::stern_gerlach) {
    throw UsageError("the Stern-Gerlach scenario has no dimension sweep");
  }
  SweepOutcome out;
  for (int n = c.n_min; n <= c.n_max; ++n) {
    out.records.push_back(timed_search(c.model, n, c.amoeba(sweep_seed(c.seed, n))));
  }
  out.violations = check_sweep(out.records);
  return out;
}

std::vector<std::string> check_sweep(const std::vector<ResultRecord>& records) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!(r.f_max < separability_bound(r.n))) {
      v.push_back("N=" + std::to_string(r.n) + ": f_max " + format_real(r.f_max) +
                  " >= separability bound " + format_real(separability_bound(r.n)));
    }
    if (i > 0 && !(r.f_max > records[i - 1].f_max - kSweepSlack)) {
      v.push_back("N=" + std::to_string(r.n) + ": f_max " + format_real(r.f_max) +
                  " does not exceed N=" + std::to_string(records[i - 1].n) + " value " +
                  format_real(records[i - 1].f_max) + " (slack 1e-4)");
    }
  }
  return v;
}

VerifyReport verify_records(const std::vector<ResultRecord>& records) {
  if (records.empty()) throw UsageError("no records to verify");
  VerifyReport report;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::ostringstream line;
    line << "record " << i + 1 << " (n=" << r.n << ", model=" << r.model << "): ";
    try {
      const SearchSettings s = unflatten_settings(family_from_string(r.model), r.n, r.settings);
      const LhvThreshold t = critical_noise_fraction(table_for(s));
      const double diff = std::abs(t.f_min - r.f_max);
      const bool ok = diff <= kVerifyTolerance && t.residual < 1e-8 &&
                      std::abs(r.separability_bound - separability_bound(r.n)) <= 1e-12;
      line << (ok ? "ok" : "MISMATCH") << " stored f_max=" << format_real(r.f_max)
           << " recomputed=" << format_real(t.f_min) << " residual=" << t.residual;
      report.ok = report.ok && ok;
    } catch (const std::exception& e) {
      line << "MISMATCH " << e.what();
      report.ok = false;
    }
    report.lines.push_back(line.str());
  }
  return report;
}

VerifyReport cmd_verify(const std::string& path) {
  return verify_records(read_records(path));
}

ResultRecord cmd_sg3(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.command = Command::sg3;
  c.validate();
  return timed_search(ObservableFamily::stern_gerlach, 3, c.amoeba(c.seed));
}

}  // namespace bellopt
