#pragma once

// Symmetric state families |psi_k> = sum_l c_l e^{i 2 pi l k / N} |u_l>,
// k = 1..N, l = 0..M, N >= M + 1.

#include <array>
#include <string>
#include <vector>

#include "qsd/fock.hpp"

namespace qsd {

class SymmetricFamily {
 public:
  int N() const { return n_; }
  int M() const { return m_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  /// N == M + 1: the states are linearly independent.
  bool linearly_independent() const { return n_ == m_ + 1; }
  /// Non-fatal validation notes (e.g. |c_2| ordering outside protocols).
  const std::vector<std::string>& warnings() const { return warnings_; }

  double min_abs_coeff() const;

 private:
  friend SymmetricFamily make_family(int, int, std::vector<cplx>, bool);
  SymmetricFamily(int n, int m, std::vector<cplx> coeffs)
      : n_(n), m_(m), coeffs_(std::move(coeffs)) {}

  int n_;
  int m_;
  std::vector<cplx> coeffs_;
  std::vector<std::string> warnings_;
};

inline constexpr double kCoefficientZeroTolerance = 1e-14;

/// Validates and builds a family. With `require_protocol_ordering` a two-photon
/// family (M == 2) must satisfy |c_2| <= |c_0|, |c_1|; otherwise a violation
/// is recorded as a warning.
SymmetricFamily make_family(int N, int M, std::vector<cplx> coeffs,
                            bool require_protocol_ordering = false);

/// Rescales coefficients to unit norm. `warning` receives a note when the
/// input was not already normalized.
std::vector<cplx> normalize_coefficients(std::vector<cplx> coeffs, std::string* warning);

/// The family states for k = 1..N, expressed in `basis`, with |u_l> the
/// basis vector at flat index labels[l].
std::vector<StateVector> family_states(const SymmetricFamily& family, const BasisPtr& basis,
                                       const std::vector<std::size_t>& labels);

/// Flat indices of |2,0>, |1,1>, |0,2> (no ancilla excitation).
std::vector<std::size_t> two_photon_labels(const FockBasis& basis);

/// |u_0> = a1^dag^2|0>/sqrt2, |u_1> = a1^dag a2^dag|0>, |u_2> = a2^dag^2|0>/sqrt2,
/// built from ladder matrices applied to vacuum.
std::array<StateVector, 3> two_photon_basis(const BasisPtr& basis);

/// Flat indices of |1,0>, |0,1>.
std::vector<std::size_t> single_photon_labels(const FockBasis& basis);

/// The family (N, 2, (1/2, 1/sqrt2, 1/2)) of states 2^{-1/2} (b_k^dag)^2 |0>
/// with b_k^dag = (a1^dag + e^{i 2 pi k/N} a2^dag)/sqrt2. Throws if the ladder
/// construction disagrees with the coefficient form by more than 1e-12.
SymmetricFamily coincident_family(int N);

/// Largest deviation between the ladder construction of the coincident states
/// and the coefficient form, over k = 1..N.
double coincident_construction_residual(int N);

/// V = sum_l e^{i 2 pi l/N}|u_l><u_l| + identity on the complement.
Operator cyclic_shift_operator(const SymmetricFamily& family, const BasisPtr& basis,
                               const std::vector<std::size_t>& labels);

}  // namespace qsd
