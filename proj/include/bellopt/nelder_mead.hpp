// nelder_mead.hpp
// Downhill simplex (amoeba) maximizer.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bellopt {

struct AmoebaConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  // Per-coordinate offset of the initial vertices from the start point.
  double initial_step = 0.5;
  std::int64_t max_evals = 20000;
  double spread_tol = 1e-7;
  int restarts = 20;
  std::uint64_t seed = 42;

  // Throws DomainError unless reflection > 0, expansion > 1, contraction
  // and shrink in (0, 1), restarts >= 1, spread_tol > 0 and max_evals >= 1.
  void validate() const;
};

struct NelderMeadResult {
  std::vector<double> x_best;
  double f_best = 0.0;
  std::int64_t evaluations = 0;
  // True when the vertex-value spread fell below spread_tol.
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Maximizes `objective` starting from the simplex x0, x0 + step * e_i.
// Throws SearchAbort (carrying the point) on a non-finite objective value.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const AmoebaConfig& cfg);

}  // namespace bellopt
