#include "bellopt/observable_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bellopt/errors.hpp"
#include "bellopt/lhv_solver.hpp"
#include "bellopt/rng.hpp"

namespace bellopt {

namespace {

constexpr double kCertificateResidual = 1e-8;
constexpr double kCertificateAgreement = 1e-7;

}  // namespace

const char* to_string(ObservableFamily family) {
  switch (family) {
    case ObservableFamily::multiport:
      return "multiport";
    case ObservableFamily::general:
      return "general";
    case ObservableFamily::stern_gerlach:
      return "stern-gerlach";
  }
  return "unknown";
}

ObservableFamily family_from_string(const std::string& name) {
  if (name == "multiport") return ObservableFamily::multiport;
  if (name == "general") return ObservableFamily::general;
  if (name == "stern-gerlach") return ObservableFamily::stern_gerlach;
  throw UsageError("unknown observable family '" + name + "'");
}

std::vector<double> GeneralSettings::flatten() const {
  std::vector<double> out;
  for (const auto& o : observables) out.insert(out.end(), o.params.begin(), o.params.end());
  return out;
}

GeneralSettings GeneralSettings::unflatten(int dim, std::span<const double> flat) {
  const int per = ObservableParams::count(dim);
  if (dim < 2 || static_cast<int>(flat.size()) != 4 * per) {
    throw InvalidDimension("GeneralSettings: expected " + std::to_string(4 * per) +
                           " parameters, got " + std::to_string(flat.size()));
  }
  GeneralSettings g;
  for (int b = 0; b < 4; ++b) {
    g.observables[b].dim = dim;
    g.observables[b].params.assign(flat.begin() + b * per, flat.begin() + (b + 1) * per);
  }
  return g;
}

ObservableFamily family_of(const SearchSettings& settings) {
  return static_cast<ObservableFamily>(settings.index());
}

int dimension_of(const SearchSettings& settings) {
  switch (family_of(settings)) {
    case ObservableFamily::multiport:
      return std::get<PhaseSettings>(settings).dim();
    case ObservableFamily::general:
      return std::get<GeneralSettings>(settings).observables[0].dim;
    case ObservableFamily::stern_gerlach:
      return 3;
  }
  return 0;
}

std::vector<double> flatten_settings(const SearchSettings& settings) {
  return std::visit([](const auto& s) { return s.flatten(); }, settings);
}

SearchSettings unflatten_settings(ObservableFamily family, int dim,
                                  std::span<const double> flat) {
  switch (family) {
    case ObservableFamily::multiport:
      return PhaseSettings::unflatten(dim, flat);
    case ObservableFamily::general:
      return GeneralSettings::unflatten(dim, flat);
    case ObservableFamily::stern_gerlach:
      if (dim != 3) throw InvalidDimension("Stern-Gerlach settings are spin-1 (N = 3)");
      return SgDirections::unflatten(flat);
  }
  throw UsageError("unknown observable family");
}

ProbabilityTable table_for(const SearchSettings& settings) {
  switch (family_of(settings)) {
    case ObservableFamily::multiport:
      return probability_table_multiport(std::get<PhaseSettings>(settings));
    case ObservableFamily::general: {
      const auto& g = std::get<GeneralSettings>(settings);
      return probability_table_general(
          unitary_from_params(g.observables[0]), unitary_from_params(g.observables[1]),
          unitary_from_params(g.observables[2]), unitary_from_params(g.observables[3]));
    }
    case ObservableFamily::stern_gerlach:
      return probability_table_sg_spin1(std::get<SgDirections>(settings));
  }
  throw UsageError("unknown observable family");
}

int search_dimension(ObservableFamily family, int dim) {
  switch (family) {
    case ObservableFamily::multiport:
      return PhaseSettings::gauge_coordinate_count(dim);
    case ObservableFamily::general:
      return 4 * ObservableParams::count(dim);
    case ObservableFamily::stern_gerlach:
      return 8;
  }
  return 0;
}

SearchSettings settings_from_coordinates(ObservableFamily family, int dim,
                                         std::span<const double> coords) {
  if (family == ObservableFamily::multiport) {
    return PhaseSettings::from_gauge_coordinates(dim, coords);
  }
  return unflatten_settings(family, dim, coords);
}

namespace {

SearchSettings canonical(const SearchSettings& s) {
  switch (family_of(s)) {
    case ObservableFamily::multiport:
      return std::get<PhaseSettings>(s).gauge_fixed();
    case ObservableFamily::general: {
      GeneralSettings g = std::get<GeneralSettings>(s);
      for (auto& o : g.observables) {
        for (double& x : o.params) x = wrap_angle(x);
      }
      return g;
    }
    case ObservableFamily::stern_gerlach:
      return std::get<SgDirections>(s).canonical();
  }
  return s;
}

struct RestartOutcome {
  std::vector<double> coords;
  double f = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t lp_solves = 0;
};

RestartOutcome run_restart(ObservableFamily family, int dim, const AmoebaConfig& cfg,
                           const ThresholdEngine& prototype, int restart) {
  ThresholdEngine engine = prototype;
  const std::int64_t solves_before = engine.solves();
  const Objective objective = [&](std::span<const double> x) {
    return engine.score(table_for(settings_from_coordinates(family, dim, x)));
  };

  // Most uniform draws already admit an LHV model, where the threshold is
  // flat at zero. Keep drawing until one violates local realism, falling
  // back to the draw with the largest score.
  Rng rng(restart_seed(cfg.seed, restart));
  const auto d = static_cast<std::size_t>(search_dimension(family, dim));
  std::vector<double> x0;
  double f0 = -std::numeric_limits<double>::infinity();
  std::int64_t evaluations = 0;
  for (int draw = 0; draw < kMaxStartDraws && !(f0 > 0.0); ++draw) {
    std::vector<double> x(d);
    for (double& v : x) v = rng.uniform(0.0, kTwoPi);
    const double f = objective(x);
    ++evaluations;
    if (f > f0) {
      f0 = f;
      x0 = std::move(x);
    }
  }

  NelderMeadResult best = nelder_mead(objective, std::move(x0), cfg);
  evaluations += best.evaluations;
  for (int round = 0; round < kMaxPolishRounds; ++round) {
    NelderMeadResult next = nelder_mead(objective, best.x_best, cfg);
    evaluations += next.evaluations;
    const bool improved = next.f_best > best.f_best + cfg.spread_tol;
    if (next.f_best > best.f_best) best = std::move(next);
    if (!improved) break;
  }
  return {std::move(best.x_best), std::max(best.f_best, 0.0), evaluations,
          engine.solves() - solves_before};
}

}  // namespace

SearchResult optimize(ObservableFamily family, int dim, const AmoebaConfig& cfg) {
  cfg.validate();
  if (dim < 2) throw InvalidDimension("optimize: dimension must be >= 2");
  if (family == ObservableFamily::stern_gerlach && dim != 3) {
    throw InvalidDimension("Stern-Gerlach search is defined for spin 1 (N = 3)");
  }

  const ThresholdEngine prototype(dim);
  SearchResult result;
  result.seed = cfg.seed;

  std::vector<double> best_coords;
  for (int r = 0; r < cfg.restarts; ++r) {
    RestartOutcome out = run_restart(family, dim, cfg, prototype, r);
    result.evaluations += out.evaluations;
    result.lp_solves += out.lp_solves;
    result.restart_bests.push_back(out.f);
    if (r == 0 || out.f > result.best_f) {
      result.best_f = out.f;
      best_coords = std::move(out.coords);
    }
  }
  result.best_settings = canonical(settings_from_coordinates(family, dim, best_coords));

  const LhvThreshold cert = critical_noise_fraction(table_for(result.best_settings));
  ++result.lp_solves;
  result.certified_f = cert.f_min;
  result.certificate_residual = cert.residual;
  if (cert.residual >= kCertificateResidual) {
    throw IntegrityError("LHV certificate residual " + std::to_string(cert.residual) +
                         " exceeds 1e-8");
  }
  if (std::abs(cert.f_min - result.best_f) > kCertificateAgreement) {
    throw IntegrityError("dense re-solve gives F = " + std::to_string(cert.f_min) +
                         " but the search reported " + std::to_string(result.best_f));
  }
  return result;
}

SearchResult optimize_multiport(int dim, const AmoebaConfig& cfg) {
  return optimize(ObservableFamily::multiport, dim, cfg);
}

SearchResult optimize_general(int dim, const AmoebaConfig& cfg) {
  return optimize(ObservableFamily::general, dim, cfg);
}

SearchResult optimize_sg_spin1(const AmoebaConfig& cfg) {
  return optimize(ObservableFamily::stern_gerlach, 3, cfg);
}

}  // namespace bellopt
