// observable_search.hpp
// Maximizes the LHV noise threshold over measurement settings with
// randomly restarted downhill-simplex searches.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bellopt/nelder_mead.hpp"
#include "bellopt/quantum_model.hpp"

namespace bellopt {

enum class ObservableFamily { multiport, general, stern_gerlach };

const char* to_string(ObservableFamily family);
ObservableFamily family_from_string(const std::string& name);

// Four independent SU(N) observables: A1, A2, B1, B2.
struct GeneralSettings {
  std::array<ObservableParams, 4> observables;

  std::vector<double> flatten() const;
  static GeneralSettings unflatten(int dim, std::span<const double> flat);
};

using SearchSettings = std::variant<PhaseSettings, GeneralSettings, SgDirections>;

ObservableFamily family_of(const SearchSettings& settings);
int dimension_of(const SearchSettings& settings);
std::vector<double> flatten_settings(const SearchSettings& settings);
SearchSettings unflatten_settings(ObservableFamily family, int dim,
                                  std::span<const double> flat);
ProbabilityTable table_for(const SearchSettings& settings);

// Number of search coordinates: 4(N-1), 4(N^2-1) or 8.
int search_dimension(ObservableFamily family, int dim);

// Maps search coordinates to settings (gauge-fixed phases for multiports).
SearchSettings settings_from_coordinates(ObservableFamily family, int dim,
                                         std::span<const double> coords);

struct SearchResult {
  SearchSettings best_settings = PhaseSettings::zeros(2);
  double best_f = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t lp_solves = 0;
  std::vector<double> restart_bests;
  std::uint64_t seed = 0;
  // Independent dense re-solve of the best settings.
  double certified_f = 0.0;
  double certificate_residual = 0.0;
};

// Restarts beyond the first amoeba run: re-seed a fresh simplex at the best
// point until it stops improving by more than spread_tol.
inline constexpr int kMaxPolishRounds = 8;

// Uniform start draws per restart while looking for a positive threshold.
inline constexpr int kMaxStartDraws = 1000;

// Throws IntegrityError when the certificate residual reaches 1e-8 or the
// dense re-solve disagrees with the search value by more than 1e-7.
SearchResult optimize(ObservableFamily family, int dim, const AmoebaConfig& cfg);

SearchResult optimize_multiport(int dim, const AmoebaConfig& cfg);
SearchResult optimize_general(int dim, const AmoebaConfig& cfg);
SearchResult optimize_sg_spin1(const AmoebaConfig& cfg);

}  // namespace bellopt
