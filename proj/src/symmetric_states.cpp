#include "qsd/symmetric_states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace qsd {

namespace {

cplx root_of_unity(double numerator, int n) {
  return std::polar(1.0, 2.0 * std::numbers::pi * numerator / static_cast<double>(n));
}

}  // namespace

double SymmetricFamily::min_abs_coeff() const {
  double best = std::abs(coeffs_.front());
  for (const auto& c : coeffs_) best = std::min(best, std::abs(c));
  return best;
}

SymmetricFamily make_family(int N, int M, std::vector<cplx> coeffs,
                            bool require_protocol_ordering) {
  if (M < 0 || static_cast<int>(coeffs.size()) != M + 1) {
    throw Error(ErrorCode::kCoefficientCount,
                "expected M+1 = " + std::to_string(M + 1) + " coefficients, got " +
                    std::to_string(coeffs.size()));
  }
  if (N < M + 1) {
    throw Error(ErrorCode::kTooFewStates, "N >= M+1 violated (N = " + std::to_string(N) +
                                              ", M = " + std::to_string(M) + ")");
  }
  double norm2 = 0.0;
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    if (std::abs(coeffs[l]) <= kCoefficientZeroTolerance) {
      throw Error(ErrorCode::kZeroCoefficient, "coefficient c_" + std::to_string(l) + " is zero");
    }
    norm2 += std::norm(coeffs[l]);
  }
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os.precision(12);
    os << "sum |c_l|^2 = " << norm2 << ", expected 1";
    throw Error(ErrorCode::kNotNormalized, os.str());
  }
  SymmetricFamily family(N, M, std::move(coeffs));
  if (M == 2) {
    const auto& c = family.coeffs();
    const double a0 = std::abs(c[0]), a1 = std::abs(c[1]), a2 = std::abs(c[2]);
    std::string offender;
    if (a2 > a0 + kNormTolerance) offender = "|c_2| > |c_0|";
    else if (a2 > a1 + kNormTolerance) offender = "|c_2| > |c_1|";
    if (!offender.empty()) {
      if (require_protocol_ordering) throw Error(ErrorCode::kCoefficientOrdering, offender);
      family.warnings_.push_back(offender + ": two-photon protocols unavailable");
    }
  }
  return family;
}

std::vector<cplx> normalize_coefficients(std::vector<cplx> coeffs, std::string* warning) {
  double norm2 = 0.0;
  for (const auto& c : coeffs) norm2 += std::norm(c);
  if (norm2 == 0.0) throw Error(ErrorCode::kZeroCoefficient, "all coefficients are zero");
  if (std::abs(norm2 - 1.0) > kNormTolerance && warning) {
    std::ostringstream os;
    os.precision(12);
    os << "coefficients rescaled from sum |c_l|^2 = " << norm2;
    *warning = os.str();
  }
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& c : coeffs) c *= s;
  return coeffs;
}

std::vector<StateVector> family_states(const SymmetricFamily& family, const BasisPtr& basis,
                                       const std::vector<std::size_t>& labels) {
  if (static_cast<int>(labels.size()) != family.M() + 1) {
    throw Error(ErrorCode::kCoefficientCount, "need M+1 basis labels");
  }
  std::set<std::size_t> unique(labels.begin(), labels.end());
  if (unique.size() != labels.size()) {
    throw Error(ErrorCode::kLabelCollision, "basis labels must be distinct");
  }
  for (auto idx : labels) {
    if (idx >= basis->dimension()) throw Error(ErrorCode::kInvalidArgument, "label out of range");
  }
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(family.N()));
  for (int k = 1; k <= family.N(); ++k) {
    CVector v = CVector::Zero(dim);
    for (int l = 0; l <= family.M(); ++l) {
      v(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(l)])) =
          family.coeffs()[static_cast<std::size_t>(l)] * root_of_unity(l * k, family.N());
    }
    out.push_back(StateVector::normalized_from(basis, std::move(v)));
  }
  return out;
}

std::vector<std::size_t> two_photon_labels(const FockBasis& basis) {
  if (basis.mode_count() != 2 || basis.max_total_photons() < 2) {
    throw Error(ErrorCode::kInsufficientCutoff,
                "two-photon basis needs 2 modes and max_total_photons >= 2");
  }
  return {basis.index_of({2, 0}), basis.index_of({1, 1}), basis.index_of({0, 2})};
}

std::vector<std::size_t> single_photon_labels(const FockBasis& basis) {
  if (basis.mode_count() != 2 || basis.max_total_photons() < 1) {
    throw Error(ErrorCode::kInsufficientCutoff,
                "single-photon basis needs 2 modes and max_total_photons >= 1");
  }
  return {basis.index_of({1, 0}), basis.index_of({0, 1})};
}

std::array<StateVector, 3> two_photon_basis(const BasisPtr& basis) {
  two_photon_labels(*basis);  // validates the cutoff
  const CMatrix c1 = annihilation_matrix(basis, 0).matrix().adjoint();
  const CMatrix c2 = annihilation_matrix(basis, 1).matrix().adjoint();
  const CVector vac = StateVector::basis_state(basis, basis->index_of({0, 0})).amplitudes();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return {StateVector(basis, inv_sqrt2 * (c1 * (c1 * vac)), true),
          StateVector(basis, c1 * (c2 * vac), true),
          StateVector(basis, inv_sqrt2 * (c2 * (c2 * vac)), true)};
}

double coincident_construction_residual(int N) {
  auto basis = build_basis(2, 2);
  const auto labels = two_photon_labels(*basis);
  const CMatrix c1 = annihilation_matrix(basis, 0).matrix().adjoint();
  const CMatrix c2 = annihilation_matrix(basis, 1).matrix().adjoint();
  const CVector vac = StateVector::basis_state(basis, basis->index_of({0, 0})).amplitudes();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const std::vector<cplx> coeffs{0.5, inv_sqrt2, 0.5};

  double worst = 0.0;
  for (int k = 1; k <= N; ++k) {
    const CMatrix bk = inv_sqrt2 * (c1 + root_of_unity(k, N) * c2);
    const CVector ladder = inv_sqrt2 * (bk * (bk * vac));
    CVector expected = CVector::Zero(ladder.size());
    for (int l = 0; l <= 2; ++l) {
      expected(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(l)])) =
          coeffs[static_cast<std::size_t>(l)] * root_of_unity(l * k, N);
    }
    worst = std::max(worst, (ladder - expected).cwiseAbs().maxCoeff());
  }
  return worst;
}

SymmetricFamily coincident_family(int N) {
  if (N < 3) throw Error(ErrorCode::kTooFewStates, "coincident family needs N >= 3");
  const double residual = coincident_construction_residual(N);
  if (residual > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument,
                "ladder construction disagrees with coefficient form: " + std::to_string(residual));
  }
  return make_family(N, 2, {0.5, 1.0 / std::numbers::sqrt2, 0.5});
}

Operator cyclic_shift_operator(const SymmetricFamily& family, const BasisPtr& basis,
                               const std::vector<std::size_t>& labels) {
  if (static_cast<int>(labels.size()) != family.M() + 1) {
    throw Error(ErrorCode::kCoefficientCount, "need M+1 basis labels");
  }
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  CMatrix v = CMatrix::Identity(dim, dim);
  for (int l = 0; l <= family.M(); ++l) {
    const auto i = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(l)]);
    v(i, i) = root_of_unity(l, family.N());
  }
  return Operator(basis, std::move(v), OperatorKind::kUnitary);
}

}  // namespace qsd
