#include "bellopt/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bellopt/errors.hpp"

namespace bellopt {

void AmoebaConfig::validate() const {
  if (!(reflection > 0.0)) throw DomainError("amoeba: reflection must be > 0");
  if (!(expansion > 1.0)) throw DomainError("amoeba: expansion must be > 1");
  if (!(contraction > 0.0 && contraction < 1.0)) {
    throw DomainError("amoeba: contraction must lie in (0, 1)");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) throw DomainError("amoeba: shrink must lie in (0, 1)");
  if (!(spread_tol > 0.0)) throw DomainError("amoeba: spread_tol must be > 0");
  if (!(initial_step > 0.0)) throw DomainError("amoeba: initial_step must be > 0");
  if (restarts < 1) throw DomainError("amoeba: restarts must be >= 1");
  if (max_evals < 1) throw DomainError("amoeba: max_evals must be >= 1");
}

namespace {

// Minimizes the negated objective; `values` hold -objective.
class Amoeba {
 public:
  Amoeba(const Objective& f, const AmoebaConfig& cfg) : f_(f), cfg_(cfg) {}

  double eval(const std::vector<double>& x) {
    const double v = f_(x);
    ++evals_;
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "objective returned " << v << " at point (";
      for (std::size_t i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
      msg << ")";
      throw SearchAbort(msg.str(), x);
    }
    return -v;
  }

  NelderMeadResult run(std::vector<double> x0) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += cfg_.initial_step;
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim && evals_ < cfg_.max_evals; ++i) {
      values[i] = eval(simplex[i]);
    }
    std::size_t filled = std::min<std::size_t>(dim + 1, static_cast<std::size_t>(evals_));

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim);
    std::vector<double> trial(dim);
    std::vector<double> trial2(dim);
    bool converged = false;

    auto point = [&](double coeff, const std::vector<double>& worst, std::vector<double>& out) {
      for (std::size_t d = 0; d < dim; ++d) out[d] = centroid[d] + coeff * (centroid[d] - worst[d]);
    };

    while (filled == dim + 1) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second = order[dim - (dim > 0 ? 1 : 0)];

      if (values[worst] - values[best] < cfg_.spread_tol) {
        converged = true;
        break;
      }
      if (evals_ >= cfg_.max_evals) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= dim; ++i) {
        if (i == worst) continue;
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
      }
      for (double& c : centroid) c /= static_cast<double>(dim);

      point(cfg_.reflection, simplex[worst], trial);
      const double fr = eval(trial);

      if (fr < values[best]) {
        point(cfg_.reflection * cfg_.expansion, simplex[worst], trial2);
        const double fe = evals_ < cfg_.max_evals ? eval(trial2) : fr + 1.0;
        if (fe < fr) {
          simplex[worst] = trial2;
          values[worst] = fe;
        } else {
          simplex[worst] = trial;
          values[worst] = fr;
        }
        continue;
      }
      if (fr < values[second]) {
        simplex[worst] = trial;
        values[worst] = fr;
        continue;
      }
      if (evals_ >= cfg_.max_evals) break;

      // Contraction: outside if the reflected point beats the worst vertex.
      const bool outside = fr < values[worst];
      point(outside ? cfg_.reflection * cfg_.contraction : -cfg_.contraction, simplex[worst],
            trial2);
      const double fc = eval(trial2);
      if (outside ? fc <= fr : fc < values[worst]) {
        simplex[worst] = trial2;
        values[worst] = fc;
        continue;
      }

      for (std::size_t i = 0; i <= dim; ++i) {
        if (i == best) continue;
        for (std::size_t d = 0; d < dim; ++d) {
          simplex[i][d] = simplex[best][d] + cfg_.shrink * (simplex[i][d] - simplex[best][d]);
        }
        if (evals_ >= cfg_.max_evals) {
          // The vertex moved without a fresh value; pin it to the best one.
          simplex[i] = simplex[best];
          values[i] = values[best];
          continue;
        }
        values[i] = eval(simplex[i]);
      }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < filled; ++i) {
      if (values[i] < values[best]) best = i;
    }
    NelderMeadResult out;
    out.x_best = simplex[best];
    out.f_best = -values[best];
    out.evaluations = evals_;
    out.converged = converged;
    return out;
  }

 private:
  const Objective& f_;
  const AmoebaConfig& cfg_;
  std::int64_t evals_ = 0;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const AmoebaConfig& cfg) {
  cfg.validate();
  if (x0.empty()) throw InvalidDimension("nelder_mead: empty start point");
  Amoeba amoeba(objective, cfg);
  return amoeba.run(std::move(x0));
}

}  // namespace bellopt
