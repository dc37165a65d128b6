#include "qsd/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qsd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kBasisMismatch: return "basis_mismatch";
    case ErrorCode::kNotHermitian: return "not_hermitian";
    case ErrorCode::kNotUnitary: return "not_unitary";
    case ErrorCode::kCoefficientCount: return "coefficient_count";
    case ErrorCode::kTooFewStates: return "too_few_states";
    case ErrorCode::kZeroCoefficient: return "zero_coefficient";
    case ErrorCode::kNotNormalized: return "not_normalized";
    case ErrorCode::kCoefficientOrdering: return "coefficient_ordering";
    case ErrorCode::kLabelCollision: return "label_collision";
    case ErrorCode::kOutsideSupport: return "outside_support";
    case ErrorCode::kLinearlyDependent: return "linearly_dependent";
    case ErrorCode::kNotOrthogonal: return "not_orthogonal";
    case ErrorCode::kInfeasibleSchedule: return "infeasible_schedule";
    case ErrorCode::kMissingAncilla: return "missing_ancilla";
    case ErrorCode::kInsufficientCutoff: return "insufficient_cutoff";
  }
  return "unknown";
}

namespace {

// All tuples of `modes` non-negative entries summing to `total`, ascending
// lexicographic order.
void enumerate_sector(int modes, int total, Occupation& prefix,
                      std::vector<Occupation>& out) {
  if (static_cast<int>(prefix.size()) == modes - 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int n = 0; n <= total; ++n) {
    prefix.push_back(n);
    enumerate_sector(modes, total - n, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

FockBasis::FockBasis(int mode_count, int max_total_photons,
                     std::vector<int> ancilla_dims)
    : mode_count_(mode_count),
      max_total_photons_(max_total_photons),
      ancilla_dims_(std::move(ancilla_dims)) {
  if (mode_count_ < 1) {
    throw Error(ErrorCode::kInvalidArgument, "mode_count must be >= 1");
  }
  if (max_total_photons_ < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_total_photons must be >= 0");
  }
  for (int d : ancilla_dims_) {
    if (d < 1) {
      throw Error(ErrorCode::kInvalidArgument, "ancilla dimensions must be >= 1");
    }
    ancilla_size_ *= static_cast<std::size_t>(d);
  }
  Occupation prefix;
  for (int total = 0; total <= max_total_photons_; ++total) {
    enumerate_sector(mode_count_, total, prefix, occupations_);
  }
}

std::size_t FockBasis::index_of(const Occupation& occupation,
                                std::span<const int> ancilla_levels) const {
  auto it = std::find(occupations_.begin(), occupations_.end(), occupation);
  if (it == occupations_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "occupation tuple not in basis");
  }
  if (ancilla_levels.size() != ancilla_dims_.size() && !ancilla_levels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "wrong number of ancilla levels");
  }
  std::size_t anc = 0;
  for (std::size_t i = 0; i < ancilla_dims_.size(); ++i) {
    int level = ancilla_levels.empty() ? 0 : ancilla_levels[i];
    if (level < 0 || level >= ancilla_dims_[i]) {
      throw Error(ErrorCode::kInvalidArgument, "ancilla level out of range");
    }
    anc = anc * static_cast<std::size_t>(ancilla_dims_[i]) + static_cast<std::size_t>(level);
  }
  return static_cast<std::size_t>(it - occupations_.begin()) * ancilla_size_ + anc;
}

const Occupation& FockBasis::occupation_at(std::size_t flat_index) const {
  return occupations_.at(flat_index / ancilla_size_);
}

std::vector<int> FockBasis::ancilla_levels_at(std::size_t flat_index) const {
  std::size_t anc = flat_index % ancilla_size_;
  std::vector<int> levels(ancilla_dims_.size());
  for (std::size_t i = ancilla_dims_.size(); i-- > 0;) {
    levels[i] = static_cast<int>(anc % static_cast<std::size_t>(ancilla_dims_[i]));
    anc /= static_cast<std::size_t>(ancilla_dims_[i]);
  }
  return levels;
}

int FockBasis::total_photons_at(std::size_t flat_index) const {
  const auto& occ = occupation_at(flat_index);
  return std::accumulate(occ.begin(), occ.end(), 0);
}

bool FockBasis::operator==(const FockBasis& other) const {
  return mode_count_ == other.mode_count_ &&
         max_total_photons_ == other.max_total_photons_ &&
         ancilla_dims_ == other.ancilla_dims_;
}

BasisPtr build_basis(int mode_count, int max_total_photons,
                     std::vector<int> ancilla_dims) {
  return std::make_shared<const FockBasis>(mode_count, max_total_photons,
                                           std::move(ancilla_dims));
}

bool same_basis(const BasisPtr& a, const BasisPtr& b) {
  return a && b && (a == b || *a == *b);
}

// ---------------------------------------------------------------------------

StateVector::StateVector(BasisPtr basis, CVector amplitudes, bool normalized)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
  if (!basis_) throw Error(ErrorCode::kInvalidArgument, "state without basis");
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dimension()) {
    throw Error(ErrorCode::kBasisMismatch, "amplitude count does not match basis dimension");
  }
  const double n = amplitudes_.norm();
  if (normalized_ && std::abs(n - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::kNotNormalized,
                "state flagged normalized has norm " + std::to_string(n));
  }
  if (!normalized_ && n > 1.0 + kNormTolerance) {
    throw Error(ErrorCode::kNotNormalized,
                "conditioned state has norm " + std::to_string(n) + " > 1");
  }
}

StateVector StateVector::normalized_from(BasisPtr basis, CVector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw Error(ErrorCode::kInvalidArgument, "cannot normalize the zero vector");
  amplitudes /= n;
  return StateVector(std::move(basis), std::move(amplitudes), true);
}

StateVector StateVector::basis_state(BasisPtr basis, std::size_t index) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(basis), std::move(v), true);
}

cplx StateVector::inner(const StateVector& other) const {
  if (!same_basis(basis_, other.basis_)) {
    throw Error(ErrorCode::kBasisMismatch, "inner product across different bases");
  }
  return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------

double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& m) {
  return (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

Operator::Operator(BasisPtr basis, CMatrix matrix, OperatorKind kind)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), kind_(kind) {
  if (!basis_) throw Error(ErrorCode::kInvalidArgument, "operator without basis");
  const auto dim = static_cast<Eigen::Index>(basis_->dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw Error(ErrorCode::kBasisMismatch, "operator shape does not match basis dimension");
  }
  if (kind_ == OperatorKind::kHermitian && hermiticity_defect(matrix_) > kOperatorTolerance) {
    throw Error(ErrorCode::kNotHermitian, "operator tagged hermitian is not");
  }
  if (kind_ == OperatorKind::kUnitary && unitarity_defect(matrix_) > kOperatorTolerance) {
    throw Error(ErrorCode::kNotUnitary, "operator tagged unitary is not");
  }
}

Operator Operator::identity(BasisPtr basis) {
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  return Operator(std::move(basis), CMatrix::Identity(dim, dim), OperatorKind::kUnitary);
}

Operator Operator::adjoint() const {
  return Operator(basis_, matrix_.adjoint(), kind_);
}

StateVector Operator::apply(const StateVector& state) const {
  if (!same_basis(basis_, state.basis())) {
    throw Error(ErrorCode::kBasisMismatch, "operator and state bases differ");
  }
  CVector out = matrix_ * state.amplitudes();
  const bool unit = std::abs(out.norm() - 1.0) <= kNormTolerance;
  return StateVector(basis_, std::move(out), unit);
}

Operator operator*(const Operator& a, const Operator& b) {
  if (!same_basis(a.basis(), b.basis())) {
    throw Error(ErrorCode::kBasisMismatch, "operator product across different bases");
  }
  OperatorKind kind = (a.kind() == OperatorKind::kUnitary && b.kind() == OperatorKind::kUnitary)
                          ? OperatorKind::kUnitary
                          : OperatorKind::kGeneral;
  return Operator(a.basis(), a.matrix() * b.matrix(), kind);
}

Operator annihilation_matrix(const BasisPtr& basis, int mode) {
  if (mode < 0 || mode >= basis->mode_count()) {
    throw Error(ErrorCode::kInvalidArgument, "mode index out of range");
  }
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  const std::size_t anc = basis->ancilla_size();
  CMatrix m = CMatrix::Zero(dim, dim);
  const auto& occs = basis->occupations();
  for (std::size_t i = 0; i < occs.size(); ++i) {
    const int n = occs[i][static_cast<std::size_t>(mode)];
    if (n == 0) continue;
    Occupation lowered = occs[i];
    --lowered[static_cast<std::size_t>(mode)];
    const std::size_t target = basis->index_of(lowered) / anc;
    for (std::size_t a = 0; a < anc; ++a) {
      m(static_cast<Eigen::Index>(target * anc + a), static_cast<Eigen::Index>(i * anc + a)) =
          std::sqrt(static_cast<double>(n));
    }
  }
  return Operator(basis, std::move(m), OperatorKind::kGeneral);
}

namespace {

// Embeds a single-ancilla matrix `local` (dims[ancilla] square) into the full
// space as identity on every other factor.
Operator embed_ancilla(const BasisPtr& basis, int ancilla, const CMatrix& local) {
  const auto& dims = basis->ancilla_dims();
  if (ancilla < 0 || ancilla >= static_cast<int>(dims.size())) {
    throw Error(ErrorCode::kMissingAncilla, "basis has no ancilla with index " +
                                                std::to_string(ancilla));
  }
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    auto levels = basis->ancilla_levels_at(static_cast<std::size_t>(col));
    const int from = levels[static_cast<std::size_t>(ancilla)];
    for (int to = 0; to < dims[static_cast<std::size_t>(ancilla)]; ++to) {
      const cplx v = local(to, from);
      if (v == cplx{}) continue;
      levels[static_cast<std::size_t>(ancilla)] = to;
      const auto row = basis->index_of(basis->occupation_at(static_cast<std::size_t>(col)), levels);
      m(static_cast<Eigen::Index>(row), col) = v;
    }
  }
  return Operator(basis, std::move(m), OperatorKind::kGeneral);
}

}  // namespace

Operator ancilla_lowering(const BasisPtr& basis, int ancilla) {
  if (ancilla < 0 || ancilla >= static_cast<int>(basis->ancilla_dims().size())) {
    throw Error(ErrorCode::kMissingAncilla, "basis has no ancilla with index " +
                                                std::to_string(ancilla));
  }
  const int d = basis->ancilla_dims()[static_cast<std::size_t>(ancilla)];
  CMatrix local = CMatrix::Zero(d, d);
  for (int l = 1; l < d; ++l) local(l - 1, l) = std::sqrt(static_cast<double>(l));
  return embed_ancilla(basis, ancilla, local);
}

Operator ancilla_transition(const BasisPtr& basis, int ancilla, int to, int from) {
  if (ancilla < 0 || ancilla >= static_cast<int>(basis->ancilla_dims().size())) {
    throw Error(ErrorCode::kMissingAncilla, "basis has no ancilla with index " +
                                                std::to_string(ancilla));
  }
  const int d = basis->ancilla_dims()[static_cast<std::size_t>(ancilla)];
  if (to < 0 || to >= d || from < 0 || from >= d) {
    throw Error(ErrorCode::kInvalidArgument, "ancilla level out of range");
  }
  CMatrix local = CMatrix::Zero(d, d);
  local(to, from) = 1.0;
  return embed_ancilla(basis, ancilla, local);
}

Operator photon_number(const BasisPtr& basis) {
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    m(i, i) = static_cast<double>(basis->total_photons_at(static_cast<std::size_t>(i)));
  }
  return Operator(basis, std::move(m), OperatorKind::kHermitian);
}

Operator matrix_exponential(const Operator& a, cplx scalar) {
  const CMatrix& m = a.matrix();
  const auto dim = m.rows();
  if (scalar == cplx{}) return Operator::identity(a.basis());

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermiticity_defect(m) > kOperatorTolerance * scale &&
      (m + m.adjoint()).cwiseAbs().maxCoeff() <= kOperatorTolerance * scale) {
    // Anti-Hermitian A = iB: exp(s*A) = exp((i*s)*B).
    Operator b(a.basis(), CMatrix(cplx{0.0, -1.0} * m), OperatorKind::kGeneral);
    return matrix_exponential(b, cplx{0.0, 1.0} * scalar);
  }

  const bool herm = hermiticity_defect(m) <= kOperatorTolerance * scale;
  const bool real_scalar = std::abs(scalar.imag()) == 0.0;
  const bool imag_scalar = std::abs(scalar.real()) == 0.0;

  if (herm && (real_scalar || imag_scalar)) {
    // exp(s*A) = V exp(s*Lambda) V^dagger with A = V Lambda V^dagger.
    const CMatrix hm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hm);
    const Eigen::VectorXd& evals = es.eigenvalues();
    CVector phases(dim);
    for (Eigen::Index i = 0; i < dim; ++i) phases(i) = std::exp(scalar * evals(i));
    CMatrix out = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const OperatorKind kind = imag_scalar ? OperatorKind::kUnitary : OperatorKind::kHermitian;
    return Operator(a.basis(), std::move(out), kind);
  }

  CMatrix scaled = scalar * m;
  CMatrix out = scaled.exp();
  return Operator(a.basis(), std::move(out), OperatorKind::kGeneral);
}

InvSqrtResult inv_sqrt_psd(const Operator& a, double rank_threshold) {
  const CMatrix& m = a.matrix();
  if (hermiticity_defect(m) > kOperatorTolerance) {
    throw Error(ErrorCode::kNotHermitian, "inv_sqrt_psd requires a Hermitian operator");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd& evals = es.eigenvalues();
  const double max_eval = evals.cwiseAbs().maxCoeff();
  if (evals.minCoeff() < -kOperatorTolerance * std::max(1.0, max_eval)) {
    throw Error(ErrorCode::kInvalidArgument, "inv_sqrt_psd requires a PSD operator");
  }
  const double cutoff = rank_threshold * max_eval;
  const auto dim = m.rows();
  Eigen::VectorXd inv(dim), proj(dim);
  int rank = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (evals(i) > cutoff && evals(i) > 0.0) {
      inv(i) = 1.0 / std::sqrt(evals(i));
      proj(i) = 1.0;
      ++rank;
    } else {
      inv(i) = 0.0;
      proj(i) = 0.0;
    }
  }
  const CMatrix& v = es.eigenvectors();
  CMatrix r = v * inv.cast<cplx>().asDiagonal() * v.adjoint();
  CMatrix p = v * proj.cast<cplx>().asDiagonal() * v.adjoint();
  // Symmetrize away rounding so the hermitian tag holds exactly.
  r = 0.5 * (r + r.adjoint()).eval();
  p = 0.5 * (p + p.adjoint()).eval();
  return InvSqrtResult{Operator(a.basis(), std::move(r), OperatorKind::kHermitian),
                       Operator(a.basis(), std::move(p), OperatorKind::kHermitian), rank};
}

}  // namespace qsd
