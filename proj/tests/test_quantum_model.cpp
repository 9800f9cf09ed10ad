#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bellopt/errors.hpp"
#include "bellopt/quantum_model.hpp"
#include "bellopt/rng.hpp"
#include "oracles.hpp"

using namespace bellopt;

namespace {

PhaseSettings random_phases(int n, Rng& rng) {
  auto draw = [&] {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(0.0, kTwoPi);
    return v;
  };
  return PhaseSettings({draw(), draw()}, {draw(), draw()});
}

UnitaryMatrix phased_multiport(const std::vector<double>& phases) {
  const int n = static_cast<int>(phases.size());
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m < n; ++m) d(m, m) = std::polar(1.0, phases[m]);
  return UnitaryMatrix(d) * bell_multiport(n);
}

// Rotation of a polar/azimuthal direction about the x axis by `angle`.
std::array<double, 2> rotate_x(std::array<double, 2> dir, double angle) {
  const double x = std::sin(dir[0]) * std::cos(dir[1]);
  const double y = std::sin(dir[0]) * std::sin(dir[1]);
  const double z = std::cos(dir[0]);
  const double y2 = std::cos(angle) * y - std::sin(angle) * z;
  const double z2 = std::sin(angle) * y + std::cos(angle) * z;
  return {std::acos(std::clamp(z2, -1.0, 1.0)), std::atan2(y2, x)};
}

}  // namespace

TEST_CASE("bell multiport is the unitary DFT matrix") {
  for (int n = 2; n <= 9; ++n) {
    const UnitaryMatrix u = bell_multiport(n);
    CHECK(u.unitarity_defect() < 1e-12);
    CHECK(std::abs(u(0, 0) - Complex(1.0 / std::sqrt(n), 0.0)) < 1e-15);
  }
  const UnitaryMatrix u3 = bell_multiport(3);
  const Complex gamma = std::polar(1.0, kTwoPi / 3);
  CHECK(std::abs(u3(1, 2) - gamma * gamma / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(u3(2, 2) - gamma / std::sqrt(3.0)) < 1e-15);
  CHECK_THROWS_AS(bell_multiport(1), InvalidDimension);
}

TEST_CASE("joint probability examples") {
  const PhaseSettings zero = PhaseSettings::zeros(2);
  CHECK(joint_probability_multiport(zero, 0, 0, 0, 0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(joint_probability_multiport(zero, 0, 0, 0, 1, 0.0)) < 1e-15);

  Rng rng(3);
  for (int n = 2; n <= 6; ++n) {
    const PhaseSettings s = random_phases(n, rng);
    CHECK(joint_probability_multiport(s, 1, 0, n - 1, 0, 1.0) ==
          doctest::Approx(1.0 / (n * n)).epsilon(1e-14));
  }

  CHECK_THROWS_AS(joint_probability_multiport(zero, 2, 0, 0, 0, 0.0), IndexError);
  CHECK_THROWS_AS(joint_probability_multiport(zero, 0, 0, 0, 2, 0.0), IndexError);
  CHECK_THROWS_AS(joint_probability_multiport(zero, 0, 0, 0, 0, 1.5), DomainError);
  CHECK_THROWS_AS(joint_probability_multiport(zero, 0, 0, 0, 0, -0.1), DomainError);
}

TEST_CASE("amplitude form agrees with the cosine form") {
  const PhaseSettings fixed({std::vector<double>{0, 0.1, 0.2}, std::vector<double>{0, 0, 0}},
                            {std::vector<double>{0, 0.3, 0.5}, std::vector<double>{0, 0, 0}});
  CHECK(std::abs(joint_probability_multiport(fixed, 0, 0, 0, 0, 0.0) -
                 oracle::multiport_cosine(fixed.alice(0), fixed.bob(0), 0, 0, 0.0)) < 1e-12);

  Rng rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 8;
    const PhaseSettings s = random_phases(n, rng);
    const double f = rng.uniform();
    const int i = trial % 2, j = (trial / 2) % 2;
    const int k = static_cast<int>(rng.uniform() * n), l = static_cast<int>(rng.uniform() * n);
    worst = std::max(worst, std::abs(joint_probability_multiport(s, i, j, k, l, f) -
                                     oracle::multiport_cosine(s.alice(i), s.bob(j), k, l, f)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("multiport tables: normalization and flat marginals") {
  const ProbabilityTable t0 = probability_table_multiport(PhaseSettings::zeros(2));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(t0(i, j, 0, 0) == doctest::Approx(0.5));
      CHECK(t0(i, j, 1, 1) == doctest::Approx(0.5));
      CHECK(std::abs(t0(i, j, 0, 1)) < 1e-15);
    }
  }
  Rng rng(5);
  for (int n = 2; n <= 9; ++n) {
    const ProbabilityTable t = probability_table_multiport(random_phases(n, rng));
    CHECK(t.normalization_defect() < 1e-12);
    CHECK(t.marginal_defect() < 1e-10);
  }
}

TEST_CASE("probability table construction") {
  CHECK_THROWS_AS(ProbabilityTable(2, std::vector<double>(15, 1.0 / 4)), InvalidDimension);
  std::vector<double> bad(16, 0.25);
  bad[3] = -1e-3;
  CHECK_THROWS_AS(ProbabilityTable(2, bad), DomainError);
  bad[3] = -1e-16;
  CHECK(ProbabilityTable(2, bad)(0, 0, 1, 1) == 0.0);
  const ProbabilityTable u = ProbabilityTable::uniform(3);
  CHECK(u.at(1, 1, 2, 2) == doctest::Approx(1.0 / 9));
  CHECK_THROWS_AS(u.at(0, 0, 3, 0), IndexError);
}

TEST_CASE("gauge fixing leaves the table unchanged") {
  Rng rng(8);
  for (int n = 2; n <= 7; ++n) {
    const PhaseSettings s = random_phases(n, rng);
    const auto a = probability_table_multiport(s).entries();
    const auto b = probability_table_multiport(s.gauge_fixed()).entries();
    double worst = 0.0;
    for (std::size_t q = 0; q < a.size(); ++q) worst = std::max(worst, std::abs(a[q] - b[q]));
    CHECK(worst < 1e-12);
    const auto coords = s.gauge_fixed().gauge_coordinates();
    CHECK(static_cast<int>(coords.size()) == PhaseSettings::gauge_coordinate_count(n));
    const auto back = PhaseSettings::from_gauge_coordinates(n, coords).flatten();
    const auto fixed = s.gauge_fixed().flatten();
    for (std::size_t q = 0; q < back.size(); ++q) CHECK(back[q] == doctest::Approx(fixed[q]));
  }
}

TEST_CASE("SU(N) parameterization") {
  Rng rng(21);
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> p(ObservableParams::count(n));
    for (double& x : p) x = rng.uniform(0.0, kTwoPi);
    const UnitaryMatrix u = unitary_from_params({n, p});
    CHECK(u.unitarity_defect() < 1e-12);
    CHECK(std::abs(u.entries().determinant() - Complex(1.0, 0.0)) < 1e-12);
  }
  const UnitaryMatrix id = unitary_from_params({3, std::vector<double>(8, 0.0)});
  CHECK((id.entries() - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-15);
  CHECK_THROWS_AS(unitary_from_params({3, std::vector<double>(7, 0.0)}), InvalidDimension);
}

TEST_CASE("general tables specialize to multiport tables") {
  Rng rng(13);
  for (int n = 2; n <= 6; ++n) {
    const PhaseSettings s = random_phases(n, rng);
    const ProbabilityTable g = probability_table_general(
        phased_multiport(s.alice(0)), phased_multiport(s.alice(1)), phased_multiport(s.bob(0)),
        phased_multiport(s.bob(1)));
    const ProbabilityTable m = probability_table_multiport(s);
    double worst = 0.0;
    for (std::size_t q = 0; q < g.entries().size(); ++q) {
      worst = std::max(worst, std::abs(g.entries()[q] - m.entries()[q]));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("spin-1 Stern-Gerlach tables") {
  for (const auto& [theta, phi] : {std::pair{0.3, 1.1}, std::pair{2.0, -0.7}}) {
    CHECK(spin1_rotation(theta, phi).unitarity_defect() < 1e-12);
  }

  // All axes along z: the singlet gives perfectly anticorrelated m values.
  const SgDirections z{{{{0.0, 0.0}, {0.0, 0.0}}}, {{{0.0, 0.0}, {0.0, 0.0}}}};
  const ProbabilityTable tz = probability_table_sg_spin1(z);
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      CHECK(tz(0, 0, k, l) == doctest::Approx(k + l == 2 ? 1.0 / 3 : 0.0));
    }
  }

  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    SgDirections d;
    for (auto* side : {&d.alice, &d.bob}) {
      for (auto& dir : *side) dir = {rng.uniform(0.0, std::numbers::pi), rng.uniform(0.0, kTwoPi)};
    }
    const ProbabilityTable t = probability_table_sg_spin1(d);
    CHECK(t.normalization_defect() < 1e-12);
    CHECK(t.marginal_defect() < 1e-10);

    SgDirections r = d;
    const double angle = rng.uniform(0.0, kTwoPi);
    for (auto* side : {&r.alice, &r.bob}) {
      for (auto& dir : *side) dir = rotate_x(dir, angle);
    }
    const ProbabilityTable tr = probability_table_sg_spin1(r);
    double worst = 0.0;
    for (std::size_t q = 0; q < t.entries().size(); ++q) {
      worst = std::max(worst, std::abs(t.entries()[q] - tr.entries()[q]));
    }
    CHECK(worst < 1e-12);
  }
}
