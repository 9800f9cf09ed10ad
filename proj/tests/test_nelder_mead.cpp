#include <doctest.h>

#include <cmath>
#include <limits>

#include "bellopt/errors.hpp"
#include "bellopt/nelder_mead.hpp"

using namespace bellopt;

TEST_CASE("maximizes a concave quadratic") {
  const Objective f = [](std::span<const double> x) {
    return -(x[0] - 1.0) * (x[0] - 1.0) - 2.0 * (x[1] + 0.5) * (x[1] + 0.5);
  };
  AmoebaConfig cfg;
  cfg.spread_tol = 1e-14;
  const NelderMeadResult r = nelder_mead(f, {0.0, 0.0}, cfg);
  CHECK(r.converged);
  CHECK(r.x_best[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x_best[1] == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(r.f_best <= 0.0);
  CHECK(r.f_best > -1e-10);
}

TEST_CASE("Rosenbrock in two dimensions") {
  const Objective f = [](std::span<const double> x) {
    return -(100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2));
  };
  AmoebaConfig cfg;
  cfg.spread_tol = 1e-16;
  const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0}, cfg);
  CHECK(r.x_best[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x_best[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("evaluation budget") {
  int calls = 0;
  const Objective f = [&](std::span<const double> x) {
    ++calls;
    return std::sin(x[0]) + std::cos(3.0 * x[1]) + x[2];
  };
  AmoebaConfig cfg;
  cfg.max_evals = 50;
  const NelderMeadResult r = nelder_mead(f, {0.0, 0.0, 0.0}, cfg);
  CHECK(r.evaluations <= 50);
  CHECK(r.evaluations == calls);
  CHECK_FALSE(r.converged);
}

TEST_CASE("flat objective converges immediately") {
  const Objective f = [](std::span<const double>) { return 0.0; };
  const NelderMeadResult r = nelder_mead(f, {1.0, 2.0, 3.0}, AmoebaConfig{});
  CHECK(r.converged);
  CHECK(r.evaluations == 4);
}

TEST_CASE("non-finite objective aborts with the offending point") {
  const Objective f = [](std::span<const double> x) {
    return x[0] > 0.25 ? std::numeric_limits<double>::quiet_NaN() : x[0];
  };
  try {
    nelder_mead(f, {0.0}, AmoebaConfig{});
    FAIL("expected SearchAbort");
  } catch (const SearchAbort& e) {
    REQUIRE(e.point().size() == 1);
    CHECK(e.point()[0] > 0.25);
  }
}

TEST_CASE("configuration validation") {
  AmoebaConfig cfg;
  cfg.expansion = 1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.contraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.spread_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK_NOTHROW(AmoebaConfig{}.validate());
}
