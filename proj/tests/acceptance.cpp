// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--known-failure K]...
//
// Exits 0 when every criterion passes or fails only among the listed
// known failures; a listed criterion that passes is reported but does not
// change the exit status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>

#include "bellopt/commands.hpp"
#include "bellopt/lhv_solver.hpp"
#include "bellopt/rng.hpp"
#include "oracles.hpp"

using namespace bellopt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RunConfig run_config(int n, ObservableFamily model, std::uint64_t seed) {
  RunConfig cfg;
  cfg.n = n;
  cfg.model = model;
  cfg.restarts = 20;
  cfg.seed = seed;
  return cfg;
}

Outcome close_to(double got, double want, double tol) {
  const bool ok = std::abs(got - want) <= tol;
  return {ok, "f_max=" + fmt("%.7f", got) + " expected=" + fmt("%.7f", want) +
                  " tol=" + fmt("%.0e", tol)};
}

Outcome criterion_n2() {
  return close_to(cmd_run(run_config(2, ObservableFamily::multiport, 42)).f_max,
                  1.0 - 1.0 / std::sqrt(2.0), 1e-4);
}

Outcome criterion_n3() {
  return close_to(cmd_run(run_config(3, ObservableFamily::multiport, 42)).f_max,
                  (11.0 - 6.0 * std::sqrt(3.0)) / 2.0, 1e-4);
}

Outcome criterion_su3() {
  return close_to(cmd_run(run_config(3, ObservableFamily::general, 7)).f_max,
                  (11.0 - 6.0 * std::sqrt(3.0)) / 2.0, 1e-3);
}

SweepOutcome sweep_cache;

Outcome criterion_sweep() {
  RunConfig cfg = run_config(2, ObservableFamily::multiport, 42);
  cfg.command = Command::sweep;
  cfg.n_min = 2;
  cfg.n_max = 9;
  sweep_cache = cmd_sweep(cfg);
  std::string detail = "f_max:";
  bool ok = sweep_cache.records.size() == 8;
  for (std::size_t i = 0; i < sweep_cache.records.size(); ++i) {
    const auto& r = sweep_cache.records[i];
    detail += " " + std::to_string(r.n) + "=" + fmt("%.6f", r.f_max);
    if (i > 0 && !(r.f_max > sweep_cache.records[i - 1].f_max - kSweepSlack)) ok = false;
  }
  return {ok, detail + " slack=1e-4"};
}

Outcome criterion_bound() {
  bool ok = !sweep_cache.records.empty();
  double margin = 1.0;
  for (const auto& r : sweep_cache.records) {
    ok = ok && r.f_max < separability_bound(r.n);
    margin = std::min(margin, separability_bound(r.n) - r.f_max);
  }
  return {ok, "smallest margin to N/(N+1)=" + fmt("%.6f", margin)};
}

Outcome criterion_sg() {
  RunConfig cfg = run_config(3, ObservableFamily::stern_gerlach, 42);
  cfg.command = Command::sg3;
  return close_to(cmd_sg3(cfg).f_max, 0.1945, 5e-4);
}

Outcome criterion_oracle() {
  Rng rng(7);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    double a[2][2], b[2][2];
    for (auto* m : {&a, &b}) {
      for (auto& row : *m) {
        for (double& x : row) x = rng.uniform(0.0, kTwoPi);
      }
    }
    const PhaseSettings s({std::vector<double>{a[0][0], a[0][1]}, {a[1][0], a[1][1]}},
                          {std::vector<double>{b[0][0], b[0][1]}, {b[1][0], b[1][1]}});
    const double lp = critical_noise_fraction(probability_table_multiport(s)).f_min;
    worst = std::max(worst, std::abs(lp - oracle::chsh_threshold(a, b)));
  }
  return {worst <= 1e-7, "max |LP - CHSH oracle|=" + fmt("%.2e", worst) + " tol=1e-7"};
}

Outcome criterion_properties() {
  Rng rng(8);
  double norm = 0.0, marg = 0.0, unit = 0.0, forms = 0.0, resid = 0.0;
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 6;
    std::array<std::vector<double>, 2> a, b;
    for (auto* side : {&a, &b}) {
      for (auto& v : *side) {
        v.resize(n);
        for (double& x : v) x = rng.uniform(0.0, kTwoPi);
      }
    }
    const PhaseSettings s(a, b);
    const ProbabilityTable table = probability_table_multiport(s);
    norm = std::max(norm, table.normalization_defect());
    marg = std::max(marg, table.marginal_defect());
    unit = std::max(unit, bell_multiport(n).unitarity_defect());
    std::vector<double> p(static_cast<std::size_t>(ObservableParams::count(n)));
    for (double& x : p) x = rng.uniform(0.0, kTwoPi);
    unit = std::max(unit, unitary_from_params({n, p}).unitarity_defect());
    const double f = rng.uniform();
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        forms = std::max(forms, std::abs(joint_probability_multiport(s, t % 2, 1, k, l, f) -
                                         oracle::multiport_cosine(a[t % 2], b[1], k, l, f)));
      }
    }
    if (n <= 4) resid = std::max(resid, critical_noise_fraction(table).residual);
  }

  AmoebaConfig cfg;
  cfg.restarts = 4;
  const SearchResult r1 = optimize_multiport(3, cfg);
  const SearchResult r2 = optimize_multiport(3, cfg);
  const bool stable = r1.best_f == r2.best_f && r1.restart_bests == r2.restart_bests &&
                      flatten_settings(r1.best_settings) == flatten_settings(r2.best_settings);

  const bool ok = norm <= 1e-12 && marg <= 1e-10 && unit <= 1e-12 && forms <= 1e-12 &&
                  resid <= 1e-8 && stable;
  return {ok, "normalization=" + fmt("%.1e", norm) + " marginals=" + fmt("%.1e", marg) +
                  " unitarity=" + fmt("%.1e", unit) + " two-form=" + fmt("%.1e", forms) +
                  " residual=" + fmt("%.1e", resid) + " rerun=" + (stable ? "bitwise" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-failure") == 0 && i + 1 < argc) {
      known.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-failure K]...\n");
      return 1;
    }
  }

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"N=2 threshold", criterion_n2},
      {"N=3 threshold", criterion_n3},
      {"SU(3) equivalence", criterion_su3},
      {"monotonic sweep N=2..9", criterion_sweep},
      {"separability bound", criterion_bound},
      {"Stern-Gerlach spin-1", criterion_sg},
      {"CHSH oracle equivalence", criterion_oracle},
      {"property suite", criterion_properties},
  };

  int unexpected = 0;
  int id = 0;
  for (const auto& [name, check] : criteria) {
    ++id;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool listed = known.count(id) > 0;
    if (!out.pass && !listed) ++unexpected;
    std::printf("%s criterion %d (%s): %s [%.1f s]%s\n", out.pass ? "PASS" : "FAIL", id, name,
                out.detail.c_str(), secs, !out.pass && listed ? " (known failure)" : "");
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
