// lp.hpp
// Dense standard-form linear programs: minimize c.x subject to A x = b, x >= 0,
// solved with a two-phase primal tableau simplex.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace bellopt {

struct LpProblem {
  Eigen::MatrixXd constraints;  // rows x vars
  Eigen::VectorXd rhs;
  Eigen::VectorXd objective;

  int num_vars() const { return static_cast<int>(constraints.cols()); }
  int num_rows() const { return static_cast<int>(constraints.rows()); }
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective_value = 0.0;
  Eigen::VectorXd variable_values;
  std::int64_t iterations = 0;
  // Basic column per retained row at termination; redundant rows dropped.
  std::vector<int> basis;
  // max |A x - b| over all original rows (optimal only).
  double residual = 0.0;
};

enum class PricingRule {
  // Lowest-index improving column, lowest-index tie-break on ratios.
  bland,
  // Most negative reduced cost; Bland's rule takes over during runs of
  // degenerate pivots and hands back after the first nondegenerate one.
  dantzig_with_bland_fallback,
};

struct SimplexOptions {
  PricingRule pricing = PricingRule::dantzig_with_bland_fallback;
  // Consecutive degenerate pivots before Bland's rule is engaged.
  int degenerate_run = 25;
  double pivot = 1e-10;
  double feasibility = 1e-9;
  double optimality = 1e-10;
  // Zero means 50 * (rows + vars) + 10000.
  std::int64_t max_iterations = 0;
};

// Throws SolverStall if the iteration guard is exceeded and DomainError on
// non-finite coefficients.
LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& opts = {});

}  // namespace bellopt
