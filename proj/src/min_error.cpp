#include "qsd/min_error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qsd {

namespace {

void require_shared_basis(const std::vector<StateVector>& states) {
  if (states.empty()) throw Error(ErrorCode::kInvalidArgument, "empty state set");
  for (const auto& s : states) {
    if (!same_basis(s.basis(), states.front().basis())) {
      throw Error(ErrorCode::kBasisMismatch, "states do not share a basis");
    }
  }
}

double completeness_residual(const std::vector<StateVector>& vectors, const Operator& support) {
  CMatrix sum = CMatrix::Zero(support.matrix().rows(), support.matrix().cols());
  for (const auto& mu : vectors) sum += mu.amplitudes() * mu.amplitudes().adjoint();
  return (sum - support.matrix()).cwiseAbs().maxCoeff();
}

bool mutually_orthogonal(const std::vector<StateVector>& vectors) {
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    for (std::size_t k = j + 1; k < vectors.size(); ++k) {
      if (std::abs(vectors[j].inner(vectors[k])) > kNormTolerance) return false;
    }
  }
  return true;
}

}  // namespace

Operator gram_sum_operator(const std::vector<StateVector>& states) {
  require_shared_basis(states);
  const auto& basis = states.front().basis();
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  CMatrix phi = CMatrix::Zero(dim, dim);
  for (const auto& s : states) phi += s.amplitudes() * s.amplitudes().adjoint();
  phi = 0.5 * (phi + phi.adjoint()).eval();
  return Operator(basis, std::move(phi), OperatorKind::kHermitian);
}

DetectionSet srm_states_numeric(const std::vector<StateVector>& states) {
  const Operator phi = gram_sum_operator(states);
  const InvSqrtResult inv = inv_sqrt_psd(phi);
  std::vector<StateVector> mus;
  mus.reserve(states.size());
  for (const auto& psi : states) {
    CVector mu = inv.inverse_sqrt.matrix() * psi.amplitudes();
    // Fix the global phase so <mu_k|psi_k> is real positive.
    const cplx overlap = mu.dot(psi.amplitudes());
    if (std::abs(overlap) > 0.0) mu *= std::conj(overlap) / std::abs(overlap);
    const bool unit = std::abs(mu.norm() - 1.0) <= kNormTolerance;
    mus.emplace_back(psi.basis(), std::move(mu), unit);
  }
  DetectionSet out{std::move(mus), inv.support_projector, 0.0, false};
  out.completeness_residual = completeness_residual(out.vectors, out.support);
  out.orthogonal = mutually_orthogonal(out.vectors);
  return out;
}

DetectionSet srm_states_closed(const SymmetricFamily& family, const BasisPtr& basis,
                               const std::vector<std::size_t>& labels) {
  // Validates labels and basis compatibility.
  (void)family_states(family, basis, labels);
  const int n = family.N();
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<StateVector> mus;
  for (int k = 1; k <= n; ++k) {
    CVector mu = CVector::Zero(dim);
    for (int l = 0; l <= family.M(); ++l) {
      const cplx c = family.coeffs()[static_cast<std::size_t>(l)];
      mu(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(l)])) =
          scale * (c / std::abs(c)) *
          std::polar(1.0, 2.0 * std::numbers::pi * l * k / static_cast<double>(n));
    }
    const bool unit = std::abs(mu.norm() - 1.0) <= kNormTolerance;
    mus.emplace_back(basis, std::move(mu), unit);
  }
  CMatrix proj = CMatrix::Zero(dim, dim);
  for (auto idx : labels) {
    proj(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = 1.0;
  }
  DetectionSet out{std::move(mus), Operator(basis, std::move(proj), OperatorKind::kHermitian),
                   0.0, false};
  out.completeness_residual = completeness_residual(out.vectors, out.support);
  out.orthogonal = mutually_orthogonal(out.vectors);
  return out;
}

cplx closed_form_detection_overlap(int N, int M, int k_minus_j) {
  const double n = static_cast<double>(N);
  const cplx num = std::polar(1.0, 2.0 * std::numbers::pi * k_minus_j * (M + 1) / n) - 1.0;
  const cplx den = std::polar(1.0, 2.0 * std::numbers::pi * k_minus_j / n) - 1.0;
  return num / den / n;
}

double success_probability_analytic(const SymmetricFamily& family) {
  double s = 0.0;
  for (const auto& c : family.coeffs()) s += std::abs(c);
  return s * s / static_cast<double>(family.N());
}

double success_probability_from_detection(const DetectionSet& detection,
                                          const std::vector<StateVector>& states) {
  if (detection.vectors.size() != states.size()) {
    throw Error(ErrorCode::kInvalidArgument, "detection/state count mismatch");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    s += std::norm(detection.vectors[k].inner(states[k]));
  }
  return s / static_cast<double>(states.size());
}

std::vector<double> outcome_distribution(const DetectionSet& detection, const StateVector& state) {
  if (!same_basis(detection.support.basis(), state.basis())) {
    throw Error(ErrorCode::kBasisMismatch, "state and detection set bases differ");
  }
  const CVector projected = detection.support.matrix() * state.amplitudes();
  const double leakage = (state.amplitudes() - projected).norm();
  if (leakage > kNormTolerance) {
    throw Error(ErrorCode::kOutsideSupport,
                "state leaks outside the family support by " + std::to_string(leakage));
  }
  std::vector<double> p;
  p.reserve(detection.vectors.size());
  for (const auto& mu : detection.vectors) p.push_back(std::norm(mu.inner(state)));
  return p;
}

CMatrix detection_overlaps(const DetectionSet& detection) {
  const auto n = static_cast<Eigen::Index>(detection.vectors.size());
  CMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      g(j, k) = detection.vectors[static_cast<std::size_t>(j)].inner(
          detection.vectors[static_cast<std::size_t>(k)]);
    }
  }
  return g;
}

}  // namespace qsd
