// lhv_solver.hpp
// The threshold linear program: the smallest white-noise fraction F for which
// a nonnegative joint distribution over the outcomes of A1, A2, B1, B2
// reproduces every noisy quantum joint probability as a marginal.
//
// Hidden variables are indexed x(k, m, l, n) = x[((k*N + m)*N + l)*N + n]
// with k, m the outcomes of A1, A2 and l, n those of B1, B2.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bellopt/lp.hpp"
#include "bellopt/quantum_model.hpp"

namespace bellopt {

struct LhvThreshold {
  double f_min = 0.0;
  std::vector<double> hidden;  // N^4 entries
  double residual = 0.0;
};

inline std::size_t hidden_index(int dim, int k, int m, int l, int n) {
  return static_cast<std::size_t>(((k * dim + m) * dim + l) * dim + n);
}

// Rows: block (i, j) then outcome pair (a, b), row = (2i + j) N^2 + a N + b,
// followed by the normalization row. Columns: N^4 hidden entries, then F.
LpProblem build_lp(const ProbabilityTable& table);

LhvThreshold critical_noise_fraction(const ProbabilityTable& table,
                                     const SimplexOptions& tol = {});

// Largest |marginal(hidden) - (F/N^2 + (1 - F) table)| over all 4N^2 events.
double verify_lhv_model(const LhvThreshold& model, const ProbabilityTable& table);

// N = 2 only: max(0, 1 - 2/S) with S the largest signed CHSH combination.
double chsh_oracle_threshold(const ProbabilityTable& table);

// Repeated threshold evaluation for one dimension, used inside the search
// loop. Solves the equivalent rescaled program
//
//   minimize s  s.t.  marginal(y) - s/N^2 = Q,  sum(y) - s = 1,  y >= 0
//
// (y = x / (1 - F), s = F / (1 - F)), whose constraint matrix does not
// depend on the table. An optimal basis therefore stays dual feasible
// when the table changes and is repaired with dual simplex pivots.
//
// s is sign-free (split into two nonnegative columns): for tables that
// already admit an LHV model the optimum is negative, s in (-1, 0], and
// measures how far the table sits inside the LHV polytope along the
// noise direction.
class ThresholdEngine {
 public:
  explicit ThresholdEngine(int dim);
  ThresholdEngine(const ThresholdEngine&);
  ThresholdEngine& operator=(const ThresholdEngine&);
  ThresholdEngine(ThresholdEngine&&) noexcept;
  ThresholdEngine& operator=(ThresholdEngine&&) noexcept;
  ~ThresholdEngine();

  int dim() const;

  // Minimal noise fraction F in [0, 1]; equals critical_noise_fraction.
  double threshold(const ProbabilityTable& table);

  // F when the table violates local realism (F > 0); otherwise the
  // nonpositive rescaled depth s. Continuous and nondecreasing in F.
  double score(const ProbabilityTable& table);

  std::int64_t solves() const;
  std::int64_t pivots() const;
  // Solves that fell back to a cold dense solve.
  std::int64_t cold_solves() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace bellopt
