// quantum_model.hpp
// Measurement unitaries (Bell multiports with phase shifters, general SU(N)
// observables, spin-1 Stern-Gerlach axes) and the joint-probability tables
// they produce on the maximally entangled two-quNit state.
//
// Indices are 0-based throughout: outcome k in [0, N), setting i in {0, 1}.

#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bellopt {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Reduce an angle into [0, 2*pi).
double wrap_angle(double angle);

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Eigen::MatrixXcd entries);

  static UnitaryMatrix identity(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  // max |(U U^dagger - I)_ij|
  double unitarity_defect() const;

 private:
  Eigen::MatrixXcd entries_;
};

UnitaryMatrix operator*(const UnitaryMatrix& lhs, const UnitaryMatrix& rhs);

// Local phase shifts, two settings per observer, N phases each.
class PhaseSettings {
 public:
  PhaseSettings(std::array<std::vector<double>, 2> phases_a,
                std::array<std::vector<double>, 2> phases_b);

  static PhaseSettings zeros(int dim);

  // Gauge-fixed search coordinates: 4 blocks of N-1 phases (A1, A2, B1, B2),
  // the first phase of every setting pinned to zero.
  static PhaseSettings from_gauge_coordinates(int dim, std::span<const double> coords);
  static int gauge_coordinate_count(int dim) { return 4 * (dim - 1); }

  int dim() const { return static_cast<int>(phases_a_[0].size()); }
  const std::vector<double>& alice(int setting) const { return phases_a_.at(setting); }
  const std::vector<double>& bob(int setting) const { return phases_b_.at(setting); }

  // Every angle wrapped into [0, 2*pi).
  PhaseSettings canonical() const;
  // First phase of each setting shifted to zero, then wrapped.
  PhaseSettings gauge_fixed() const;
  std::vector<double> gauge_coordinates() const;

  // A1, A2, B1, B2, each N angles.
  std::vector<double> flatten() const;
  static PhaseSettings unflatten(int dim, std::span<const double> flat);

 private:
  std::array<std::vector<double>, 2> phases_a_;
  std::array<std::vector<double>, 2> phases_b_;
};

// Pure-state (F = 0) joint probabilities P(k, l | A_i, B_j) for the four
// setting pairs. Block order: (A1,B1), (A1,B2), (A2,B1), (A2,B2).
class ProbabilityTable {
 public:
  // Entries in [-1e-14, 0) are clamped to zero; anything more negative,
  // or non-finite, is rejected.
  ProbabilityTable(int dim, std::vector<double> entries);

  static ProbabilityTable uniform(int dim);

  int dim() const { return dim_; }
  double operator()(int i, int j, int k, int l) const {
    return entries_[index(i, j, k, l)];
  }
  double at(int i, int j, int k, int l) const;
  std::span<const double> block(int i, int j) const;
  const std::vector<double>& entries() const { return entries_; }

  std::size_t index(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((2 * i + j) * dim_ + k) * dim_ + l);
  }

  // Largest |block sum - 1| over the four blocks.
  double normalization_defect() const;
  // Largest |single-observer marginal - 1/N|.
  double marginal_defect() const;

 private:
  int dim_;
  std::vector<double> entries_;
};

// The isotropic-noise mixture F/N^2 + (1 - F) * base.
class NoisyTable {
 public:
  NoisyTable(ProbabilityTable base, double noise_fraction);

  const ProbabilityTable& base() const { return base_; }
  double noise_fraction() const { return noise_; }
  int dim() const { return base_.dim(); }
  double operator()(int i, int j, int k, int l) const;

 private:
  ProbabilityTable base_;
  double noise_;
};

// Parameters of a special unitary: N(N-1)/2 two-mode rotations (angle,
// phase) in lexicographic mode-pair order, then N-1 diagonal phases.
struct ObservableParams {
  int dim = 0;
  std::vector<double> params;

  static int count(int dim) { return dim * dim - 1; }
};

// Stern-Gerlach quantization axes as (theta, phi) polar/azimuthal pairs.
struct SgDirections {
  std::array<std::array<double, 2>, 2> alice{};
  std::array<std::array<double, 2>, 2> bob{};

  // theta folded into [0, pi], phi wrapped into [0, 2*pi).
  SgDirections canonical() const;
  std::vector<double> flatten() const;
  static SgDirections unflatten(std::span<const double> flat);
};

UnitaryMatrix bell_multiport(int dim);

double joint_probability_multiport(const PhaseSettings& settings, int i, int j,
                                   int k, int l, double noise_fraction);

ProbabilityTable probability_table_multiport(const PhaseSettings& settings);

UnitaryMatrix unitary_from_params(const ObservableParams& p);

// entry(k, l | i, j) = (1/N) |sum_m U_Ai(m, k) U_Bj(m, l)|^2
ProbabilityTable probability_table_general(const UnitaryMatrix& a1, const UnitaryMatrix& a2,
                                           const UnitaryMatrix& b1, const UnitaryMatrix& b2);

// Spin-1 rotation taking the z eigenbasis (m = +1, 0, -1) to the eigenbasis
// of the spin component along (theta, phi).
UnitaryMatrix spin1_rotation(double theta, double phi);

ProbabilityTable probability_table_sg_spin1(const SgDirections& dirs);

}  // namespace bellopt
