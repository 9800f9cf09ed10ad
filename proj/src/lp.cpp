#include "bellopt/lp.hpp"

#include <cmath>
#include <string>

#include "bellopt/errors.hpp"

namespace bellopt {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kRatioTie = 1e-14;

// Row-major tableau over [original | artificial] columns; the right-hand
// side and the reduced-cost row are kept separately.
class Tableau {
 public:
  Tableau(const LpProblem& p, const SimplexOptions& tol)
      : m_(p.num_rows()),
        n_(p.num_vars()),
        width_(n_ + m_),
        tol_(tol),
        a_(static_cast<std::size_t>(m_) * width_, 0.0),
        b_(m_),
        cost_(width_, 0.0),
        active_(m_, true),
        basis_(m_) {
    for (int i = 0; i < m_; ++i) {
      const double sign = p.rhs(i) < 0.0 ? -1.0 : 1.0;
      double* row = row_ptr(i);
      for (int j = 0; j < n_; ++j) row[j] = sign * p.constraints(i, j);
      row[n_ + i] = 1.0;
      b_[i] = sign * p.rhs(i);
      basis_[i] = n_ + i;
    }
    max_iter_ = tol.max_iterations > 0 ? tol.max_iterations
                                        : 50LL * (m_ + n_) + 10000;
  }

  LpSolution solve(const LpProblem& p) {
    LpSolution out;

    // Phase 1: minimize the sum of artificials.
    std::fill(cost_.begin(), cost_.end(), 0.0);
    value_ = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double* row = row_ptr(i);
      for (int j = 0; j < n_; ++j) cost_[j] -= row[j];
      value_ -= b_[i];
    }
    if (!run(width_)) {
      // Phase 1 is bounded below by zero, so this cannot trigger.
      throw SolverStall("phase 1 reported an unbounded direction");
    }
    if (-value_ > tol_.feasibility) {
      out.status = LpStatus::infeasible;
      out.iterations = iterations_;
      return out;
    }
    drive_out_artificials();

    // Phase 2 over original columns only.
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = p.objective(j);
    value_ = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      const double cb = p.objective(basis_[i]);
      if (cb == 0.0) continue;
      const double* row = row_ptr(i);
      for (int j = 0; j < n_; ++j) cost_[j] -= cb * row[j];
      value_ -= cb * b_[i];
    }
    const bool bounded = run(n_);
    out.iterations = iterations_;
    if (!bounded) {
      out.status = LpStatus::unbounded;
      return out;
    }

    out.status = LpStatus::optimal;
    out.variable_values = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      out.basis.push_back(basis_[i]);
      out.variable_values(basis_[i]) = std::max(b_[i], 0.0);
    }
    out.objective_value = p.objective.dot(out.variable_values);
    out.residual =
        (p.constraints * out.variable_values - p.rhs).cwiseAbs().maxCoeff();
    return out;
  }

 private:
  double* row_ptr(int i) { return a_.data() + static_cast<std::size_t>(i) * width_; }

  // Entering column: lowest-index improving one under Bland's rule,
  // otherwise the most negative reduced cost.
  int choose_entering(int columns, bool bland) const {
    int enter = -1;
    double most = -tol_.optimality;
    for (int j = 0; j < columns; ++j) {
      if (cost_[j] >= -tol_.optimality) continue;
      if (bland) return j;
      if (cost_[j] < most) {
        most = cost_[j];
        enter = j;
      }
    }
    return enter;
  }

  // Minimum-ratio row; ties go to the lowest basic index. -1 if unbounded.
  int choose_leaving(int enter) {
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      const double aij = row_ptr(i)[enter];
      if (aij <= tol_.pivot) continue;
      const double ratio = std::max(b_[i], 0.0) / aij;
      if (leave < 0 || ratio < best - kRatioTie) {
        leave = i;
        best = ratio;
      } else if (ratio <= best + kRatioTie && basis_[i] < basis_[leave]) {
        leave = i;
        best = std::min(best, ratio);
      }
    }
    return leave;
  }

  // Returns false on an unbounded ray.
  bool run(int columns) {
    int degenerate = 0;
    for (;;) {
      const bool bland = tol_.pricing == PricingRule::bland || degenerate >= tol_.degenerate_run;
      const int enter = choose_entering(columns, bland);
      if (enter < 0) return true;
      const int leave = choose_leaving(enter);
      if (leave < 0) return false;

      const double step = std::max(b_[leave], 0.0) / row_ptr(leave)[enter];
      degenerate = step <= kRatioTie ? degenerate + 1 : 0;
      pivot(leave, enter, columns);
      if (++iterations_ > max_iter_) {
        throw SolverStall("simplex exceeded " + std::to_string(max_iter_) + " iterations");
      }
    }
  }

  void pivot(int r, int q, int columns) {
    double* prow = row_ptr(r);
    const double inv = 1.0 / prow[q];
    for (int j = 0; j < columns; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    b_[r] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || !active_[i]) continue;
      double* row = row_ptr(i);
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j = 0; j < columns; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
      b_[i] -= f * b_[r];
    }
    const double f = cost_[q];
    if (f != 0.0) {
      for (int j = 0; j < columns; ++j) cost_[j] -= f * prow[j];
      cost_[q] = 0.0;
      value_ -= f * b_[r];
    }
    basis_[r] = q;
  }

  // Artificials left basic at zero level are pivoted onto any original
  // column with a usable entry; rows without one are linearly dependent
  // and are dropped.
  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      const double* row = row_ptr(r);
      int best = -1;
      double mag = tol_.pivot;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(row[j]) > mag) {
          mag = std::abs(row[j]);
          best = j;
        }
      }
      if (best < 0) {
        active_[r] = false;
      } else {
        pivot(r, best, width_);
      }
    }
  }

  int m_;
  int n_;
  int width_;
  SimplexOptions tol_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> cost_;
  std::vector<bool> active_;
  std::vector<int> basis_;
  double value_ = 0.0;  // minus the current objective
  std::int64_t iterations_ = 0;
  std::int64_t max_iter_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& opts) {
  if (problem.rhs.size() != problem.num_rows() ||
      problem.objective.size() != problem.num_vars()) {
    throw InvalidDimension("solve_lp: inconsistent problem dimensions");
  }
  if (!problem.constraints.allFinite() || !problem.rhs.allFinite() ||
      !problem.objective.allFinite()) {
    throw DomainError("solve_lp: non-finite coefficient");
  }
  Tableau t(problem, opts);
  return t.solve(problem);
}

}  // namespace bellopt
