#pragma once

// Dense linear algebra over enumerated multimode Fock bases.
//
// A FockBasis is the direct sum of photon-number sectors 0..max_total_photons
// over `mode_count` modes, optionally tensored with finite-level ancillas
// (atomic levels, truncated up-converted modes). Occupation tuples are
// ordered by total photon number, then lexicographically by tuple. The flat
// index of (occupation i, ancilla levels a_0..a_{m-1}) is
//   i * prod(ancilla_dims) + row-major index of (a_0..a_{m-1}).
// Serialized vectors rely on this order.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qsd/error.hpp"

namespace qsd {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

using Occupation = std::vector<int>;

class FockBasis {
 public:
  FockBasis(int mode_count, int max_total_photons, std::vector<int> ancilla_dims);

  int mode_count() const { return mode_count_; }
  int max_total_photons() const { return max_total_photons_; }
  const std::vector<Occupation>& occupations() const { return occupations_; }
  const std::vector<int>& ancilla_dims() const { return ancilla_dims_; }

  std::size_t occupation_count() const { return occupations_.size(); }
  std::size_t ancilla_size() const { return ancilla_size_; }
  std::size_t dimension() const { return occupations_.size() * ancilla_size_; }

  /// Flat index of an occupation tuple combined with ancilla levels.
  /// Throws kInvalidArgument when the tuple is not in the basis.
  std::size_t index_of(const Occupation& occupation,
                       std::span<const int> ancilla_levels = {}) const;

  /// Inverse of index_of.
  const Occupation& occupation_at(std::size_t flat_index) const;
  std::vector<int> ancilla_levels_at(std::size_t flat_index) const;

  int total_photons_at(std::size_t flat_index) const;

  bool operator==(const FockBasis& other) const;

 private:
  int mode_count_;
  int max_total_photons_;
  std::vector<Occupation> occupations_;
  std::vector<int> ancilla_dims_;
  std::size_t ancilla_size_ = 1;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr build_basis(int mode_count, int max_total_photons,
                     std::vector<int> ancilla_dims = {});

bool same_basis(const BasisPtr& a, const BasisPtr& b);

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kOperatorTolerance = 1e-10;

/// Complex amplitudes over a basis. Conditioned (no-jump, projected) states
/// are subnormalized and carry normalized == false.
class StateVector {
 public:
  StateVector(BasisPtr basis, CVector amplitudes, bool normalized);

  /// Builds a normalized state, rescaling `amplitudes` to unit norm.
  static StateVector normalized_from(BasisPtr basis, CVector amplitudes);
  /// Unit vector at a flat basis index.
  static StateVector basis_state(BasisPtr basis, std::size_t index);

  const BasisPtr& basis() const { return basis_; }
  const CVector& amplitudes() const { return amplitudes_; }
  bool normalized() const { return normalized_; }
  double norm() const { return amplitudes_.norm(); }
  double norm_squared() const { return amplitudes_.squaredNorm(); }

  /// <this|other>
  cplx inner(const StateVector& other) const;

 private:
  BasisPtr basis_;
  CVector amplitudes_;
  bool normalized_;
};

enum class OperatorKind { kHermitian, kUnitary, kGeneral };

/// Square matrix over a basis. The kind tag is verified at construction.
class Operator {
 public:
  Operator(BasisPtr basis, CMatrix matrix, OperatorKind kind);

  static Operator identity(BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  const CMatrix& matrix() const { return matrix_; }
  OperatorKind kind() const { return kind_; }

  Operator adjoint() const;

  /// Applies the operator. A result that is not a unit vector is flagged
  /// unnormalized.
  StateVector apply(const StateVector& state) const;

 private:
  BasisPtr basis_;
  CMatrix matrix_;
  OperatorKind kind_;
};

Operator operator*(const Operator& a, const Operator& b);

double hermiticity_defect(const CMatrix& m);
double unitarity_defect(const CMatrix& m);

/// Photon annihilation operator for `mode`, identity on ancilla factors.
/// Truncated at max_total_photons.
Operator annihilation_matrix(const BasisPtr& basis, int mode);

/// Lowering operator |l-1><l| * sqrt(l) on ancilla factor `ancilla`,
/// i.e. a truncated bosonic annihilator for an up-converted mode.
Operator ancilla_lowering(const BasisPtr& basis, int ancilla);

/// |to><from| on ancilla factor `ancilla`, identity elsewhere.
Operator ancilla_transition(const BasisPtr& basis, int ancilla, int to, int from);

/// Total number of photons in the fundamental modes, as a diagonal operator.
Operator photon_number(const BasisPtr& basis);

/// exp(scalar * A). Uses an eigendecomposition when scalar*A is Hermitian
/// or anti-Hermitian, scaling-and-squaring otherwise.
Operator matrix_exponential(const Operator& a, cplx scalar);

struct InvSqrtResult {
  Operator inverse_sqrt;
  Operator support_projector;
  int rank = 0;
};

inline constexpr double kDefaultRankThreshold = 1e-12;

/// Pseudo-inverse square root of a Hermitian PSD operator. Eigenvalues at or
/// below rank_threshold * max eigenvalue are treated as null space.
InvSqrtResult inv_sqrt_psd(const Operator& a,
                           double rank_threshold = kDefaultRankThreshold);

}  // namespace qsd
