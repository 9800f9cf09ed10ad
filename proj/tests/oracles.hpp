// Independent reference computations used by the tests. Nothing here calls
// into the library's probability code.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Joint multiport probability in cosine form:
//   F/N^2 + (1-F)/N^3 [N + 2 sum_{m<m'} cos(Phi_m - Phi_m')],
//   Phi_m = a_m + b_m + 2 pi m (k + l) / N.
inline double multiport_cosine(const std::vector<double>& a, const std::vector<double>& b, int k,
                               int l, double f) {
  const int n = static_cast<int>(a.size());
  std::vector<double> phi(n);
  for (int m = 0; m < n; ++m) phi[m] = a[m] + b[m] + kTwoPi * m * (k + l) / n;
  double s = n;
  for (int m = 0; m < n; ++m) {
    for (int q = m + 1; q < n; ++q) s += 2.0 * std::cos(phi[m] - phi[q]);
  }
  return f / (n * n) + (1.0 - f) * s / (static_cast<double>(n) * n * n);
}

// N = 2 multiport threshold straight from the phases. The correlation of
// outputs is E(i,j) = cos(a_i[1] - a_i[0] + b_j[1] - b_j[0]); the threshold
// is max(0, 1 - 2/S) with S the largest CHSH combination.
inline double chsh_threshold(const double a[2][2], const double b[2][2]) {
  double e[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) e[i][j] = std::cos(a[i][1] - a[i][0] + b[j][1] - b[j][0]);
  }
  const double sum = e[0][0] + e[0][1] + e[1][0] + e[1][1];
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) s = std::max(s, std::abs(sum - 2.0 * e[i][j]));
  }
  return s > 2.0 ? 1.0 - 2.0 / s : 0.0;
}

}  // namespace oracle
