#include "bellopt/quantum_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bellopt/errors.hpp"

namespace bellopt {

namespace {

constexpr double kNegativeClamp = 1e-14;

void require_dim(int dim, const char* where) {
  if (dim < 2) {
    throw InvalidDimension(std::string(where) + ": dimension must be >= 2, got " +
                           std::to_string(dim));
  }
}

void require_setting(int s) {
  if (s != 0 && s != 1) throw IndexError("setting index must be 0 or 1");
}

void require_outcome(int k, int dim) {
  if (k < 0 || k >= dim) {
    throw IndexError("outcome index " + std::to_string(k) + " outside [0, " +
                     std::to_string(dim) + ")");
  }
}

std::vector<double> wrapped(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = wrap_angle(v[i]);
  return out;
}

std::vector<double> shifted(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = wrap_angle(v[i] - v[0]);
  return out;
}

// Phase-shifted multiport amplitude sum_m e^{i(phiA_m + phiB_m)} U_mk U_ml.
Complex multiport_amplitude(const std::vector<double>& pa, const std::vector<double>& pb,
                            int k, int l) {
  const int n = static_cast<int>(pa.size());
  Complex sum{0.0, 0.0};
  for (int m = 0; m < n; ++m) {
    // U_mk U_ml = gamma^{m(k+l)} / N; keep the exponent reduced mod N.
    const int power = (m * (k + l)) % n;
    sum += std::polar(1.0, pa[m] + pb[m] + kTwoPi * power / n);
  }
  return sum / static_cast<double>(n);
}

}  // namespace

double wrap_angle(double angle) {
  if (!std::isfinite(angle)) throw DomainError("angle is not finite");
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// UnitaryMatrix

UnitaryMatrix::UnitaryMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw InvalidDimension("unitary must be square");
  require_dim(static_cast<int>(entries_.rows()), "UnitaryMatrix");
}

UnitaryMatrix UnitaryMatrix::identity(int dim) {
  require_dim(dim, "UnitaryMatrix::identity");
  return UnitaryMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

double UnitaryMatrix::unitarity_defect() const {
  const Eigen::MatrixXcd g = entries_ * entries_.adjoint();
  return (g - Eigen::MatrixXcd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

UnitaryMatrix operator*(const UnitaryMatrix& lhs, const UnitaryMatrix& rhs) {
  if (lhs.dim() != rhs.dim()) throw InvalidDimension("unitary product: dimension mismatch");
  return UnitaryMatrix(lhs.entries() * rhs.entries());
}

// ---------------------------------------------------------------------------
// PhaseSettings

PhaseSettings::PhaseSettings(std::array<std::vector<double>, 2> phases_a,
                             std::array<std::vector<double>, 2> phases_b)
    : phases_a_(std::move(phases_a)), phases_b_(std::move(phases_b)) {
  const std::size_t n = phases_a_[0].size();
  require_dim(static_cast<int>(n), "PhaseSettings");
  for (const auto* side : {&phases_a_, &phases_b_}) {
    for (const auto& v : *side) {
      if (v.size() != n) throw InvalidDimension("PhaseSettings: ragged phase vectors");
      for (double x : v) {
        if (!std::isfinite(x)) throw DomainError("PhaseSettings: non-finite phase");
      }
    }
  }
}

PhaseSettings PhaseSettings::zeros(int dim) {
  require_dim(dim, "PhaseSettings::zeros");
  std::vector<double> z(static_cast<std::size_t>(dim), 0.0);
  return PhaseSettings({z, z}, {z, z});
}

PhaseSettings PhaseSettings::from_gauge_coordinates(int dim, std::span<const double> coords) {
  require_dim(dim, "PhaseSettings::from_gauge_coordinates");
  if (static_cast<int>(coords.size()) != gauge_coordinate_count(dim)) {
    throw InvalidDimension("expected " + std::to_string(gauge_coordinate_count(dim)) +
                           " gauge coordinates, got " + std::to_string(coords.size()));
  }
  std::array<std::vector<double>, 4> s;
  for (int b = 0; b < 4; ++b) {
    s[b].assign(static_cast<std::size_t>(dim), 0.0);
    for (int m = 1; m < dim; ++m) s[b][m] = coords[b * (dim - 1) + (m - 1)];
  }
  return PhaseSettings({s[0], s[1]}, {s[2], s[3]});
}

PhaseSettings PhaseSettings::canonical() const {
  return PhaseSettings({wrapped(phases_a_[0]), wrapped(phases_a_[1])},
                       {wrapped(phases_b_[0]), wrapped(phases_b_[1])});
}

PhaseSettings PhaseSettings::gauge_fixed() const {
  return PhaseSettings({shifted(phases_a_[0]), shifted(phases_a_[1])},
                       {shifted(phases_b_[0]), shifted(phases_b_[1])});
}

std::vector<double> PhaseSettings::gauge_coordinates() const {
  const PhaseSettings g = gauge_fixed();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(gauge_coordinate_count(dim())));
  for (const auto* v : {&g.phases_a_[0], &g.phases_a_[1], &g.phases_b_[0], &g.phases_b_[1]}) {
    out.insert(out.end(), v->begin() + 1, v->end());
  }
  return out;
}

std::vector<double> PhaseSettings::flatten() const {
  std::vector<double> out;
  for (const auto* v : {&phases_a_[0], &phases_a_[1], &phases_b_[0], &phases_b_[1]}) {
    out.insert(out.end(), v->begin(), v->end());
  }
  return out;
}

PhaseSettings PhaseSettings::unflatten(int dim, std::span<const double> flat) {
  require_dim(dim, "PhaseSettings::unflatten");
  if (flat.size() != static_cast<std::size_t>(4 * dim)) {
    throw InvalidDimension("expected " + std::to_string(4 * dim) + " phases, got " +
                           std::to_string(flat.size()));
  }
  auto slice = [&](int b) {
    return std::vector<double>(flat.begin() + b * dim, flat.begin() + (b + 1) * dim);
  };
  return PhaseSettings({slice(0), slice(1)}, {slice(2), slice(3)});
}

// ---------------------------------------------------------------------------
// ProbabilityTable / NoisyTable

ProbabilityTable::ProbabilityTable(int dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
  require_dim(dim, "ProbabilityTable");
  if (entries_.size() != static_cast<std::size_t>(4 * dim * dim)) {
    throw InvalidDimension("ProbabilityTable: expected 4N^2 entries");
  }
  for (double& p : entries_) {
    if (!std::isfinite(p) || p < -kNegativeClamp || p > 1.0 + 1e-12) {
      throw DomainError("ProbabilityTable: entry outside [0, 1]: " + std::to_string(p));
    }
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
  }
}

ProbabilityTable ProbabilityTable::uniform(int dim) {
  require_dim(dim, "ProbabilityTable::uniform");
  const double u = 1.0 / (static_cast<double>(dim) * dim);
  return ProbabilityTable(dim, std::vector<double>(static_cast<std::size_t>(4 * dim * dim), u));
}

double ProbabilityTable::at(int i, int j, int k, int l) const {
  require_setting(i);
  require_setting(j);
  require_outcome(k, dim_);
  require_outcome(l, dim_);
  return (*this)(i, j, k, l);
}

std::span<const double> ProbabilityTable::block(int i, int j) const {
  require_setting(i);
  require_setting(j);
  return std::span<const double>(entries_).subspan(index(i, j, 0, 0),
                                                   static_cast<std::size_t>(dim_ * dim_));
}

double ProbabilityTable::normalization_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (double p : block(i, j)) s += p;
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  return worst;
}

double ProbabilityTable::marginal_defect() const {
  const double target = 1.0 / dim_;
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < dim_; ++a) {
        double row = 0.0;
        double col = 0.0;
        for (int b = 0; b < dim_; ++b) {
          row += (*this)(i, j, a, b);
          col += (*this)(i, j, b, a);
        }
        worst = std::max({worst, std::abs(row - target), std::abs(col - target)});
      }
    }
  }
  return worst;
}

NoisyTable::NoisyTable(ProbabilityTable base, double noise_fraction)
    : base_(std::move(base)), noise_(noise_fraction) {
  if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) {
    throw DomainError("noise fraction must lie in [0, 1]");
  }
}

double NoisyTable::operator()(int i, int j, int k, int l) const {
  const double n = base_.dim();
  return noise_ / (n * n) + (1.0 - noise_) * base_.at(i, j, k, l);
}

// ---------------------------------------------------------------------------
// SgDirections

SgDirections SgDirections::canonical() const {
  auto fold = [](std::array<double, 2> dir) {
    double theta = wrap_angle(dir[0]);
    double phi = dir[1];
    if (theta > std::numbers::pi) {
      theta = kTwoPi - theta;
      phi += std::numbers::pi;
    }
    return std::array<double, 2>{theta, wrap_angle(phi)};
  };
  SgDirections out;
  for (int s = 0; s < 2; ++s) {
    out.alice[s] = fold(alice[s]);
    out.bob[s] = fold(bob[s]);
  }
  return out;
}

std::vector<double> SgDirections::flatten() const {
  return {alice[0][0], alice[0][1], alice[1][0], alice[1][1],
          bob[0][0],   bob[0][1],   bob[1][0],   bob[1][1]};
}

SgDirections SgDirections::unflatten(std::span<const double> flat) {
  if (flat.size() != 8) throw InvalidDimension("SgDirections: expected 8 angles");
  SgDirections d;
  d.alice = {{{flat[0], flat[1]}, {flat[2], flat[3]}}};
  d.bob = {{{flat[4], flat[5]}, {flat[6], flat[7]}}};
  return d;
}

// ---------------------------------------------------------------------------
// Operations

UnitaryMatrix bell_multiport(int dim) {
  require_dim(dim, "bell_multiport");
  Eigen::MatrixXcd u(dim, dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      u(j, i) = std::polar(scale, kTwoPi * ((j * i) % dim) / dim);
    }
  }
  return UnitaryMatrix(std::move(u));
}

double joint_probability_multiport(const PhaseSettings& settings, int i, int j, int k, int l,
                                   double noise_fraction) {
  const int n = settings.dim();
  require_setting(i);
  require_setting(j);
  require_outcome(k, n);
  require_outcome(l, n);
  if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) {
    throw DomainError("noise fraction must lie in [0, 1]");
  }
  const double pure =
      std::norm(multiport_amplitude(settings.alice(i), settings.bob(j), k, l)) / n;
  return noise_fraction / (static_cast<double>(n) * n) + (1.0 - noise_fraction) * pure;
}

ProbabilityTable probability_table_multiport(const PhaseSettings& settings) {
  const int n = settings.dim();
  std::vector<double> entries(static_cast<std::size_t>(4 * n * n));
  std::size_t idx = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto& pa = settings.alice(i);
      const auto& pb = settings.bob(j);
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          entries[idx++] = std::norm(multiport_amplitude(pa, pb, k, l)) / n;
        }
      }
    }
  }
  return ProbabilityTable(n, std::move(entries));
}

UnitaryMatrix unitary_from_params(const ObservableParams& p) {
  const int n = p.dim;
  require_dim(n, "unitary_from_params");
  if (static_cast<int>(p.params.size()) != ObservableParams::count(n)) {
    throw InvalidDimension("unitary_from_params: expected " +
                           std::to_string(ObservableParams::count(n)) + " parameters, got " +
                           std::to_string(p.params.size()));
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  std::size_t idx = 0;
  // u <- u * G_pq, so the product reads G_01 G_02 ... G_(n-2)(n-1).
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double theta = p.params[idx++];
      const double phi = p.params[idx++];
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const Complex off_ab = -std::polar(s, phi);
      const Complex off_ba = std::polar(s, -phi);
      for (int r = 0; r < n; ++r) {
        const Complex ua = u(r, a);
        const Complex ub = u(r, b);
        u(r, a) = ua * c + ub * off_ba;
        u(r, b) = ua * off_ab + ub * c;
      }
    }
  }
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    double alpha;
    if (r + 1 < n) {
      alpha = p.params[idx++];
      total += alpha;
    } else {
      alpha = -total;
    }
    u.row(r) *= std::polar(1.0, alpha);
  }
  return UnitaryMatrix(std::move(u));
}

ProbabilityTable probability_table_general(const UnitaryMatrix& a1, const UnitaryMatrix& a2,
                                           const UnitaryMatrix& b1, const UnitaryMatrix& b2) {
  const int n = a1.dim();
  if (a2.dim() != n || b1.dim() != n || b2.dim() != n) {
    throw InvalidDimension("probability_table_general: dimension mismatch");
  }
  const UnitaryMatrix* alice[2] = {&a1, &a2};
  const UnitaryMatrix* bob[2] = {&b1, &b2};
  std::vector<double> entries(static_cast<std::size_t>(4 * n * n));
  std::size_t idx = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // amplitude(k, l) = sum_m UA(m, k) UB(m, l) = (UA^T UB)(k, l)
      const Eigen::MatrixXcd amp = alice[i]->entries().transpose() * bob[j]->entries();
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) entries[idx++] = std::norm(amp(k, l)) / n;
      }
    }
  }
  return ProbabilityTable(n, std::move(entries));
}

UnitaryMatrix spin1_rotation(double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta) / std::numbers::sqrt2;
  // Wigner d^1(theta), rows m' = +1, 0, -1 and columns m = +1, 0, -1.
  const double d[3][3] = {{(1 + c) / 2, -s, (1 - c) / 2},
                          {s, c, -s},
                          {(1 - c) / 2, s, (1 + c) / 2}};
  Eigen::MatrixXcd r(3, 3);
  for (int row = 0; row < 3; ++row) {
    const double m_row = 1 - row;
    for (int col = 0; col < 3; ++col) r(row, col) = std::polar(d[row][col], -m_row * phi);
  }
  return UnitaryMatrix(std::move(r));
}

ProbabilityTable probability_table_sg_spin1(const SgDirections& dirs) {
  const SgDirections d = dirs.canonical();
  // Singlet amplitudes psi(a, b), index 0, 1, 2 <-> m = +1, 0, -1;
  // nonzero only for m_a = -m_b with sign (-1)^(1 - m_a).
  const double amp = 1.0 / std::sqrt(3.0);
  const double psi[3] = {amp, -amp, amp};

  std::vector<double> entries(36);
  std::size_t idx = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const UnitaryMatrix ra = spin1_rotation(d.alice[i][0], d.alice[i][1]);
      const UnitaryMatrix rb = spin1_rotation(d.bob[j][0], d.bob[j][1]);
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          Complex sum{0.0, 0.0};
          for (int a = 0; a < 3; ++a) {
            sum += std::conj(ra(a, k)) * std::conj(rb(2 - a, l)) * psi[a];
          }
          entries[idx++] = std::norm(sum);
        }
      }
    }
  }
  return ProbabilityTable(3, std::move(entries));
}

}  // namespace bellopt
