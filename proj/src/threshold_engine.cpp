#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bellopt/errors.hpp"
#include "bellopt/lhv_solver.hpp"

namespace bellopt {

namespace {

constexpr double kPrimalTol = 1e-10;
constexpr double kDualTol = 1e-10;
constexpr double kPivotTol = 1e-9;
constexpr double kHarrisTol = 1e-9;
constexpr int kRefactorInterval = 128;
constexpr double kMinRcond = 1e-12;
constexpr int kPivotBudgetPerRow = 20;
constexpr double kCostShift = 1e-6;

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

struct ThresholdEngine::State {
  int n = 0;
  int n2 = 0;
  int hidden = 0;
  int cols = 0;  // hidden + 2: s+ = column hidden, s- = column hidden + 1
  int m = 0;

  // Retained constraint rows as build_lp row numbers (4N^2 = normalization).
  std::vector<int> full_rows;
  std::vector<int> reduced_of_full;

  // Column-compressed constraint matrix over the retained rows.
  std::vector<int> col_ptr;
  std::vector<int> row_idx;
  std::vector<double> val;

  std::vector<int> basis;  // column per row
  std::vector<int> home;   // optimal basis for the uniform table
  std::vector<int> where;  // row per column, -1 if nonbasic
  RowMajor binv;
  std::vector<double> dcost;
  std::vector<double> shift;         // cost shifts of the hidden columns
  std::vector<double> active_shift;  // shifts in force, zero when solving exactly
  mutable std::vector<double> block;  // scratch for hidden_products
  Eigen::VectorXd xb;
  Eigen::VectorXd rhs;
  int since_refactor = 0;

  std::int64_t solves = 0;
  std::int64_t pivots = 0;
  std::int64_t cold = 0;

  explicit State(int dim) : n(dim), n2(dim * dim), hidden(n2 * n2), cols(hidden + 2) {
    select_rows();
    build_columns();
    // Deterministic shifts in [1, 2) * kCostShift, spread by the golden ratio.
    shift.resize(hidden);
    active_shift.assign(hidden, 0.0);
    for (int j = 0; j < hidden; ++j) {
      shift[j] = kCostShift * (1.0 + std::fmod(0.6180339887498949 * (j + 1), 1.0));
    }
    // Any dual-feasible basis will do; the uniform table (optimum s = -1,
    // y = 0) is the cheapest to reach.
    load_rhs(ProbabilityTable::uniform(n));
    cold_start();
    home = basis;
  }

  // Independent subset of the constraint rows, (2N-1)^2 in total:
  // normalization; outcome pairs (a, b) with a, b < N-1 in every block; the
  // b = N-1 column of blocks (A_i, B1), fixing Alice's marginals; the a = N-1
  // row of blocks (A1, B_j), fixing Bob's.
  void select_rows() {
    full_rows.push_back(4 * n2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            const bool interior = a < n - 1 && b < n - 1;
            const bool alice_marginal = j == 0 && b == n - 1 && a < n - 1;
            const bool bob_marginal = i == 0 && a == n - 1 && b < n - 1;
            if (interior || alice_marginal || bob_marginal) {
              full_rows.push_back((2 * i + j) * n2 + a * n + b);
            }
          }
        }
      }
    }
    m = static_cast<int>(full_rows.size());
    reduced_of_full.assign(4 * n2 + 1, -1);
    for (int r = 0; r < m; ++r) reduced_of_full[full_rows[r]] = r;
  }

  void build_columns() {
    col_ptr.assign(1, 0);
    for (int k = 0; k < n; ++k) {
      for (int mm = 0; mm < n; ++mm) {
        for (int l = 0; l < n; ++l) {
          for (int q = 0; q < n; ++q) {
            const int alice[2] = {k, mm};
            const int bob[2] = {l, q};
            for (int i = 0; i < 2; ++i) {
              for (int j = 0; j < 2; ++j) {
                const int r = reduced_of_full[(2 * i + j) * n2 + alice[i] * n + bob[j]];
                if (r >= 0) {
                  row_idx.push_back(r);
                  val.push_back(1.0);
                }
              }
            }
            row_idx.push_back(reduced_of_full[4 * n2]);
            val.push_back(1.0);
            col_ptr.push_back(static_cast<int>(row_idx.size()));
          }
        }
      }
    }
    for (const double sign : {1.0, -1.0}) {
      for (int r = 0; r < m; ++r) {
        row_idx.push_back(r);
        val.push_back(sign * (full_rows[r] == 4 * n2 ? -1.0 : -1.0 / n2));
      }
      col_ptr.push_back(static_cast<int>(row_idx.size()));
    }
  }

  void load_rhs(const ProbabilityTable& table) {
    rhs.resize(m);
    const auto& q = table.entries();
    for (int r = 0; r < m; ++r) {
      rhs(r) = full_rows[r] == 4 * n2 ? 1.0 : q[full_rows[r]];
    }
  }

  double cost(int j) const {
    if (j == hidden) return 1.0;
    if (j == hidden + 1) return -1.0;
    return active_shift[j];
  }

  double column_dot(int j, const double* dense) const {
    double s = 0.0;
    for (int t = col_ptr[j]; t < col_ptr[j + 1]; ++t) s += dense[row_idx[t]] * val[t];
    return s;
  }

  // dense . A_j for every hidden column at once. Column (k, m, l, q) has a
  // unit entry in each block plus normalization, so the products are sums of
  // four N x N arrays scattered from the reduced rows.
  void hidden_products(const double* dense, double* out) const {
    block.assign(4 * n2, 0.0);
    for (int r = 0; r < m; ++r) {
      if (full_rows[r] < 4 * n2) block[full_rows[r]] = dense[r];
    }
    const double norm = dense[reduced_of_full[4 * n2]];
    const double* b11 = block.data();
    const double* b12 = b11 + n2;
    const double* b21 = b12 + n2;
    const double* b22 = b21 + n2;
    for (int k = 0; k < n; ++k) {
      for (int mm = 0; mm < n; ++mm) {
        for (int l = 0; l < n; ++l) {
          const double p11 = b11[k * n + l];
          const double p21 = b21[mm * n + l];
          const double* p12 = b12 + k * n;
          const double* p22 = b22 + mm * n;
          // Same summation order as column_dot.
          for (int q = 0; q < n; ++q) *out++ = p11 + p12[q] + p21 + p22[q] + norm;
        }
      }
    }
  }

  LpProblem dense_problem() const {
    LpProblem p;
    p.constraints = Eigen::MatrixXd::Zero(m, cols);
    for (int j = 0; j < cols; ++j) {
      for (int t = col_ptr[j]; t < col_ptr[j + 1]; ++t) p.constraints(row_idx[t], j) = val[t];
    }
    p.rhs = rhs;
    p.objective = Eigen::VectorXd::Zero(cols);
    p.objective(hidden) = 1.0;
    p.objective(hidden + 1) = -1.0;
    return p;
  }

  void cold_start() {
    const LpSolution sol = solve_lp(dense_problem());
    if (sol.status != LpStatus::optimal || static_cast<int>(sol.basis.size()) != m) {
      throw SolverStall("threshold engine: cold start did not yield a full basis");
    }
    basis = sol.basis;
    ++cold;
    if (!refactor()) throw SolverStall("threshold engine: singular starting basis");
    xb = binv * rhs;
  }

  bool refactor() {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
    where.assign(cols, -1);
    for (int r = 0; r < m; ++r) {
      const int j = basis[r];
      where[j] = r;
      for (int t = col_ptr[j]; t < col_ptr[j + 1]; ++t) b(row_idx[t], r) = val[t];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    if (!(lu.rcond() > kMinRcond)) return false;
    binv = lu.inverse();
    since_refactor = 0;
    reprice();
    return true;
  }

  void reprice() {
    // Reduced costs d_j = c_j - pi . A_j with pi = c_B^T B^{-1}.
    Eigen::VectorXd cb(m);
    for (int r = 0; r < m; ++r) cb(r) = cost(basis[r]);
    const Eigen::VectorXd pi = binv.transpose() * cb;
    dcost.assign(cols, 0.0);
    hidden_products(pi.data(), dcost.data());
    for (int j = 0; j < cols; ++j) {
      dcost[j] = where[j] >= 0 ? 0.0 : cost(j) - (j < hidden ? dcost[j] : column_dot(j, pi.data()));
    }
  }

  double min_reduced_cost() const {
    double lo = 0.0;
    for (int j = 0; j < cols; ++j) {
      if (where[j] < 0) lo = std::min(lo, dcost[j]);
    }
    return lo;
  }

  // Row r of B^-1 A, zero on basic columns.
  void pivot_row(int r, std::vector<double>& alpha) const {
    const double* rho = binv.row(r).data();
    hidden_products(rho, alpha.data());
    for (int j = hidden; j < cols; ++j) alpha[j] = column_dot(j, rho);
    for (const int j : basis) alpha[j] = 0.0;
    // s+ and s- are exact negatives: while one is basic the other may only
    // replace it, never join it. Roundoff in alpha must not say otherwise.
    for (const int j : {hidden, hidden + 1}) {
      if (where[j] >= 0 && where[j] != r) alpha[2 * hidden + 1 - j] = 0.0;
    }
  }

  void entering_column(int q, Eigen::VectorXd& aq) const {
    aq.setZero();
    for (int t = col_ptr[q]; t < col_ptr[q + 1]; ++t) aq += binv.col(row_idx[t]) * val[t];
  }

  // Basis change at row r with entering column q. Returns false if the
  // periodic refactorization finds the basis singular.
  bool pivot(int r, int q, const Eigen::VectorXd& aq, const std::vector<double>& alpha) {
    const double piv = aq(r);
    const double theta = xb(r) / piv;
    xb -= theta * aq;
    xb(r) = theta;

    const double delta = dcost[q] / piv;
    for (int j = 0; j < cols; ++j) dcost[j] -= delta * alpha[j];
    const int leaving = basis[r];
    dcost[leaving] = -delta;
    dcost[q] = 0.0;

    binv.row(r) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == r || aq(i) == 0.0) continue;
      binv.row(i) -= aq(i) * binv.row(r);
    }
    where[leaving] = -1;
    where[q] = r;
    basis[r] = q;
    ++pivots;
    if (++since_refactor < kRefactorInterval) return true;
    if (!refactor()) return false;
    xb = binv * rhs;
    return true;
  }

  // Dual simplex from a dual-feasible basis. Returns false when it gives up.
  bool dual_simplex(int& budget) {
    std::vector<double> alpha(cols, 0.0);
    std::vector<double> ratios(cols);
    Eigen::VectorXd aq(m);
    for (;;) {
      // Leaving row by dual steepest edge: the explicit inverse gives the
      // exact weights ||e_r B^-1||^2.
      int r = -1;
      double best_score = 0.0;
      for (int i = 0; i < m; ++i) {
        if (xb(i) >= -kPrimalTol) continue;
        const double score = xb(i) * xb(i) / binv.row(i).squaredNorm();
        if (r < 0 || score > best_score) {
          r = i;
          best_score = score;
        }
      }
      if (r < 0) return true;
      if (--budget < 0) return false;

      pivot_row(r, alpha);
      // Harris ratio test: bound the step with reduced costs relaxed by
      // kHarrisTol, then take the largest pivot under the bound.
      constexpr double inf = std::numeric_limits<double>::infinity();
      double bound = inf;
      for (int j = 0; j < cols; ++j) {
        const double a = alpha[j];
        const double d = std::max(dcost[j], 0.0);
        ratios[j] = a < -kPivotTol ? d / -a : inf;
        bound = std::min(bound, a < -kPivotTol ? (d + kHarrisTol) / -a : inf);
      }
      int q = -1;
      for (int j = 0; j < cols && bound < inf; ++j) {
        if (ratios[j] <= bound && (q < 0 || alpha[j] < alpha[q])) q = j;
      }
      if (q < 0) return false;  // primal infeasible; numerically suspect here

      entering_column(q, aq);
      if (std::abs(aq(r)) < kPivotTol) return false;
      if (!pivot(r, q, aq, alpha)) return false;
    }
  }

  // Primal simplex from a primal-feasible basis, used to clear the small
  // dual infeasibilities left when the cost shifts are removed.
  bool primal_simplex(int& budget) {
    std::vector<double> alpha(cols, 0.0);
    Eigen::VectorXd aq(m);
    for (;;) {
      int q = -1;
      for (int j = 0; j < cols; ++j) {
        if (where[j] < 0 && dcost[j] < -kDualTol && (q < 0 || dcost[j] < dcost[q])) q = j;
      }
      if (q < 0) return true;
      if (--budget < 0) return false;

      entering_column(q, aq);
      constexpr double inf = std::numeric_limits<double>::infinity();
      double bound = inf;
      for (int i = 0; i < m; ++i) {
        if (aq(i) > kPivotTol) bound = std::min(bound, (std::max(xb(i), 0.0) + kHarrisTol) / aq(i));
      }
      int r = -1;
      for (int i = 0; i < m && bound < inf; ++i) {
        if (aq(i) > kPivotTol && std::max(xb(i), 0.0) / aq(i) <= bound && (r < 0 || aq(i) > aq(r))) {
          r = i;
        }
      }
      if (r < 0) return false;  // unbounded; cannot happen for this program

      pivot_row(r, alpha);
      if (!pivot(r, q, aq, alpha)) return false;
    }
  }

  double s_value() const {
    double s = 0.0;
    if (where[hidden] >= 0) s += std::max(xb(where[hidden]), 0.0);
    if (where[hidden + 1] >= 0) s -= std::max(xb(where[hidden + 1]), 0.0);
    return s;
  }

  // Dual simplex on shifted costs, then primal cleanup on the true ones.
  // Without the shifts the program is massively dual degenerate and the
  // dual simplex can stall for thousands of pivots.
  bool warm_solve(bool fresh) {
    if ((fresh || since_refactor >= kRefactorInterval) && !refactor()) return false;
    if (min_reduced_cost() < -kDualTol) {
      if (fresh || !refactor() || min_reduced_cost() < -kDualTol) return false;
    }
    // Shifting only the nonbasic costs keeps pi, so the basis stays dual
    // feasible.
    for (int j = 0; j < hidden; ++j) {
      active_shift[j] = where[j] < 0 ? shift[j] : 0.0;
      dcost[j] += active_shift[j];
    }
    xb = binv * rhs;
    int budget = kPivotBudgetPerRow * m + 1000;
    const bool dual_ok = dual_simplex(budget);
    std::fill(active_shift.begin(), active_shift.end(), 0.0);
    if (!dual_ok) return false;
    reprice();
    return primal_simplex(budget);
  }

  // Warm start from the previous basis; on a stall, from the uniform-table
  // basis (dual feasible for every table); last resort a dense cold solve.
  double solve(const ProbabilityTable& table) {
    load_rhs(table);
    ++solves;
    if (warm_solve(false)) return s_value();
    basis = home;
    if (warm_solve(true)) return s_value();
    cold_start();
    return s_value();
  }
};

ThresholdEngine::ThresholdEngine(int dim) {
  if (dim < 2) throw InvalidDimension("ThresholdEngine: dimension must be >= 2");
  state_ = std::make_unique<State>(dim);
}

ThresholdEngine::ThresholdEngine(const ThresholdEngine& other)
    : state_(std::make_unique<State>(*other.state_)) {}

ThresholdEngine& ThresholdEngine::operator=(const ThresholdEngine& other) {
  if (this != &other) state_ = std::make_unique<State>(*other.state_);
  return *this;
}

ThresholdEngine::ThresholdEngine(ThresholdEngine&&) noexcept = default;
ThresholdEngine& ThresholdEngine::operator=(ThresholdEngine&&) noexcept = default;
ThresholdEngine::~ThresholdEngine() = default;

int ThresholdEngine::dim() const { return state_->n; }

double ThresholdEngine::score(const ProbabilityTable& table) {
  if (table.dim() != state_->n) {
    throw InvalidDimension("ThresholdEngine: table dimension " + std::to_string(table.dim()) +
                           " does not match engine dimension " + std::to_string(state_->n));
  }
  const double s = state_->solve(table);
  return s > 0.0 ? std::min(s / (1.0 + s), 1.0) : s;
}

double ThresholdEngine::threshold(const ProbabilityTable& table) {
  return std::max(score(table), 0.0);
}

std::int64_t ThresholdEngine::solves() const { return state_->solves; }
std::int64_t ThresholdEngine::pivots() const { return state_->pivots; }
std::int64_t ThresholdEngine::cold_solves() const { return state_->cold; }

}  // namespace bellopt
