#include "bellopt/lhv_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellopt/errors.hpp"

namespace bellopt {

LpProblem build_lp(const ProbabilityTable& table) {
  const int n = table.dim();
  const int n2 = n * n;
  const int hidden = n2 * n2;
  const int rows = 4 * n2 + 1;
  const int f_col = hidden;
  const double uniform = 1.0 / n2;

  LpProblem p;
  p.constraints = Eigen::MatrixXd::Zero(rows, hidden + 1);
  p.rhs = Eigen::VectorXd::Zero(rows);
  p.objective = Eigen::VectorXd::Zero(hidden + 1);
  p.objective(f_col) = 1.0;

  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      for (int l = 0; l < n; ++l) {
        for (int q = 0; q < n; ++q) {
          const auto col = static_cast<Eigen::Index>(hidden_index(n, k, m, l, q));
          const int alice[2] = {k, m};
          const int bob[2] = {l, q};
          for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
              p.constraints((2 * i + j) * n2 + alice[i] * n + bob[j], col) = 1.0;
            }
          }
          p.constraints(rows - 1, col) = 1.0;
        }
      }
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const int row = (2 * i + j) * n2 + a * n + b;
          const double q = table(i, j, a, b);
          p.constraints(row, f_col) = q - uniform;
          p.rhs(row) = q;
        }
      }
    }
  }
  p.rhs(rows - 1) = 1.0;
  return p;
}

LhvThreshold critical_noise_fraction(const ProbabilityTable& table,
                                     const SimplexOptions& tol) {
  const LpProblem lp = build_lp(table);
  const LpSolution sol = solve_lp(lp, tol);
  if (sol.status != LpStatus::optimal) {
    // F = 1 with the uniform hidden distribution is always feasible.
    throw SolverStall(std::string("threshold LP returned ") + to_string(sol.status));
  }
  const int hidden = lp.num_vars() - 1;
  LhvThreshold out;
  out.f_min = std::clamp(sol.variable_values(hidden), 0.0, 1.0);
  out.hidden.assign(sol.variable_values.data(), sol.variable_values.data() + hidden);
  out.residual = verify_lhv_model(out, table);
  return out;
}

double verify_lhv_model(const LhvThreshold& model, const ProbabilityTable& table) {
  const int n = table.dim();
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  if (model.hidden.size() != n2 * n2) {
    throw InvalidDimension("verify_lhv_model: hidden distribution has " +
                           std::to_string(model.hidden.size()) + " entries, expected " +
                           std::to_string(n2 * n2));
  }
  // marg[(2i + j) N^2 + a N + b]
  std::vector<double> marg(4 * n2, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      for (int l = 0; l < n; ++l) {
        for (int q = 0; q < n; ++q) {
          const double x = model.hidden[hidden_index(n, k, m, l, q)];
          marg[0 * n2 + k * n + l] += x;
          marg[1 * n2 + k * n + q] += x;
          marg[2 * n2 + m * n + l] += x;
          marg[3 * n2 + m * n + q] += x;
        }
      }
    }
  }
  const NoisyTable noisy(table, std::clamp(model.f_min, 0.0, 1.0));
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const double target = noisy(i, j, a, b);
          worst = std::max(worst, std::abs(marg[(2 * i + j) * n2 + a * n + b] - target));
        }
      }
    }
  }
  return worst;
}

double chsh_oracle_threshold(const ProbabilityTable& table) {
  if (table.dim() != 2) {
    throw InvalidDimension("chsh_oracle_threshold requires N = 2, got " +
                           std::to_string(table.dim()));
  }
  double e[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      e[i][j] = table(i, j, 0, 0) + table(i, j, 1, 1) - table(i, j, 0, 1) - table(i, j, 1, 0);
    }
  }
  // The eight CHSH expressions: one term negated, overall sign free.
  double s = 0.0;
  for (int flip = 0; flip < 4; ++flip) {
    double v = 0.0;
    for (int t = 0; t < 4; ++t) {
      const double term = e[t / 2][t % 2];
      v += (t == flip) ? -term : term;
    }
    s = std::max(s, std::abs(v));
  }
  if (s <= 2.0) return 0.0;
  return std::clamp(1.0 - 2.0 / s, 0.0, 1.0);
}

}  // namespace bellopt
