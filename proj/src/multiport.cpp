#include "qsd/multiport.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qsd {

MultiportUnitary build_multiport(int N, double arg_c0, double arg_c1) {
  if (N < 2) throw Error(ErrorCode::kInvalidArgument, "multiport needs N >= 2");
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  MultiportUnitary u{N, CMatrix(N, N), arg_c1 - arg_c0};
  for (int j = 1; j <= N; ++j) {
    u.matrix(j - 1, 0) = scale * std::polar(1.0, u.phase_offset);
    for (int r = 2; r <= N; ++r) {
      u.matrix(j - 1, r - 1) =
          scale * std::polar(1.0, -2.0 * std::numbers::pi * j * (r - 1) / static_cast<double>(N));
    }
  }
  const double defect = unitarity_defect(u.matrix);
  if (defect > kOperatorTolerance) {
    throw Error(ErrorCode::kNotUnitary, "multiport matrix not unitary: " + std::to_string(defect));
  }
  return u;
}

namespace {

void require_single_photon(const SymmetricFamily& family) {
  if (family.M() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "multiport discrimination needs an M = 1 family");
  }
}

}  // namespace

MultiportUnitary build_multiport(const SymmetricFamily& family) {
  require_single_photon(family);
  return build_multiport(family.N(), std::arg(family.coeffs()[0]), std::arg(family.coeffs()[1]));
}

CVector single_photon_input(const SymmetricFamily& family, int k) {
  require_single_photon(family);
  if (k < 1 || k > family.N()) throw Error(ErrorCode::kInvalidArgument, "k out of range 1..N");
  CVector d = CVector::Zero(family.N());
  d(0) = family.coeffs()[0];
  d(1) = family.coeffs()[1] *
         std::polar(1.0, 2.0 * std::numbers::pi * k / static_cast<double>(family.N()));
  return d;
}

std::vector<double> output_distribution(const MultiportUnitary& u, const CVector& input) {
  if (input.size() != u.N) {
    throw Error(ErrorCode::kBasisMismatch, "input length " + std::to_string(input.size()) +
                                               " != port count " + std::to_string(u.N));
  }
  const CVector out = u.matrix * input;
  std::vector<double> p(static_cast<std::size_t>(u.N));
  for (int j = 0; j < u.N; ++j) p[static_cast<std::size_t>(j)] = std::norm(out(j));
  return p;
}

double output_probability_closed_form(const SymmetricFamily& family, int k, int j) {
  require_single_photon(family);
  const double n = static_cast<double>(family.N());
  return (1.0 + 2.0 * std::abs(family.coeffs()[0]) * std::abs(family.coeffs()[1]) *
                    std::cos(2.0 * std::numbers::pi * (k - j) / n)) /
         n;
}

SinglePhotonDiscrimination min_error_single_photon(const SymmetricFamily& family) {
  const MultiportUnitary u = build_multiport(family);
  SinglePhotonDiscrimination out;
  out.table.resize(family.N(), family.N());
  double correct = 0.0;
  for (int k = 1; k <= family.N(); ++k) {
    const auto p = output_distribution(u, single_photon_input(family, k));
    for (int j = 1; j <= family.N(); ++j) out.table(k - 1, j - 1) = p[static_cast<std::size_t>(j - 1)];
    correct += p[static_cast<std::size_t>(k - 1)];
  }
  out.P_C = correct / static_cast<double>(family.N());
  return out;
}

}  // namespace qsd
