#pragma once

// Shared generators for property-style tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qsd/symmetric_states.hpp"

namespace qsd::testing {

/// Random normalized coefficients with magnitudes bounded away from zero and
/// uniform phases. With `protocol_order`, |c_2| is the smallest magnitude.
inline std::vector<cplx> random_coeffs(std::mt19937_64& rng, int M, bool protocol_order = false,
                                       bool real_positive = false) {
  std::uniform_real_distribution<double> mag(0.15, 1.0);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  std::vector<double> mags(static_cast<std::size_t>(M + 1));
  for (auto& m : mags) m = mag(rng);
  if (protocol_order && M == 2) {
    std::sort(mags.begin(), mags.end(), std::greater<>());
    if (rng() % 2) std::swap(mags[0], mags[1]);
  }
  double n2 = 0.0;
  for (double m : mags) n2 += m * m;
  std::vector<cplx> c;
  for (double m : mags) c.push_back(std::polar(m / std::sqrt(n2), real_positive ? 0.0 : phase(rng)));
  return c;
}

inline SymmetricFamily random_family(std::mt19937_64& rng, int N, int M, bool protocol_order = false) {
  return make_family(N, M, random_coeffs(rng, M, protocol_order), protocol_order);
}

/// Haar-ish random unitary from QR of a complex Gaussian matrix.
inline CMatrix random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMatrix z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = cplx{g(rng), g(rng)};
  Eigen::HouseholderQR<CMatrix> qr(z);
  return qr.householderQ();
}

inline CMatrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMatrix z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = cplx{g(rng), g(rng)};
  return 0.5 * (z + z.adjoint());
}

}  // namespace qsd::testing
