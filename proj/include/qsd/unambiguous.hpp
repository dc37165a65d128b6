#pragma once

// Optimum unambiguous discrimination of N = 3 two-photon families:
// orthogonalize by TPA (no-jump branch) or SFG (vacuum-ancilla branch), then
// read out projectively. The SFG inconclusive branch leaves an up-converted
// single-photon state that can be fed to a multiport.

#include <array>
#include <optional>
#include <vector>

#include "qsd/min_error.hpp"
#include "qsd/physical_models.hpp"

namespace qsd {

enum class OutcomeKind { kConclusive, kInconclusive };

struct UnambiguousOutcome {
  OutcomeKind kind = OutcomeKind::kConclusive;
  std::optional<int> guess;        ///< 1-based, conclusive only
  StateVector conditional_state;   ///< normalized post-branch state
  double branch_probability = 0.0;
};

/// P_D = N min|c_l|^2; requires N == M + 1.
double success_probability_ud(const SymmetricFamily& family);

struct TpaOrthogonalization {
  ChannelSchedule schedule;
  std::vector<StateVector> states;          ///< unnormalized psi~_k, k = 1..3
  std::vector<double> success;              ///< <psi~_k|psi~_k>
  std::vector<double> jump_probability;     ///< 1 - success
};

TpaOrthogonalization orthogonalize_tpa(const SymmetricFamily& family);

enum class SfgOrder {
  kPairedFirst,  ///< exp(-iH11 T0) exp(-iH12 T1): the (1,2) crystal acts first
  kSameModeFirst,
};

struct SfgOrthogonalization {
  ChannelSchedule schedule;
  BasisPtr enlarged_basis;                  ///< two fundamental modes + ancillas A, B
  BasisPtr upconverted_basis;               ///< ancillas A, B only
  std::vector<StateVector> total;           ///< |Psi_k^tot>
  std::vector<StateVector> conclusive;      ///< <0_A 0_B|Psi_k^tot>, fundamental basis
  std::vector<StateVector> inconclusive;    ///< xi~_k on the up-converted basis, as simulated
  std::vector<double> inconclusive_probability;
  double leakage = 0.0;                     ///< weight outside both branches
};

SfgOrthogonalization orthogonalize_sfg(const SymmetricFamily& family,
                                       SfgOrder order = SfgOrder::kPairedFirst);

/// Inconclusive-branch amplitudes (A, B) from the closed form, with Arg c0
/// factored out: sqrt(|c0|^2-|c2|^2) and e^{i(Arg c1 - Arg c0)} sqrt(|c1|^2-|c2|^2) e^{i2pi k/3}.
std::array<cplx, 2> expected_inconclusive_amplitudes(const SymmetricFamily& family, int k);

/// Max over k of the distance between the simulated xi~_k and the closed form,
/// after aligning global phase.
double inconclusive_residual(const SymmetricFamily& family, const SfgOrthogonalization& sfg);

/// Probabilities p(k) = |<psi~_k/|psi~_k| | input/|input|>|^2.
std::vector<double> projective_discriminate(const std::vector<StateVector>& orthogonal_states,
                                            const StateVector& input);

/// Rotates `v` by a global phase so that it best matches `reference`.
CVector align_global_phase(const CVector& v, const CVector& reference);

struct RecoveredFamily {
  std::optional<SymmetricFamily> family;  ///< empty when uninformative
  bool uninformative() const { return !family.has_value(); }
};

/// Normalized single-photon family (N = 3, M = 1) carried by the SFG
/// inconclusive branch, or uninformative when |c0| or |c1| equals |c2|.
RecoveredFamily inconclusive_family(const SymmetricFamily& family);

/// Generic optimum orthogonalizing filter for N = M + 1 families:
/// psi~_k = sum_l min|c| (c_l/|c_l|) e^{i2pi lk/N} |u_l>.
std::vector<StateVector> orthogonalize_filter(const SymmetricFamily& family, const BasisPtr& basis,
                                              const std::vector<std::size_t>& labels);

/// max_k || psi~_k - sqrt(P_D) mu_k ||. Uses the TPA simulation for N = 3
/// two-photon families with |c_2| smallest and the generic filter otherwise.
double equivalence_check(const SymmetricFamily& family);

/// Largest |<psi~_j|psi~_k>| / (|psi~_j||psi~_k|) over j != k.
double orthogonality_residual(const std::vector<StateVector>& states);

/// Two-branch outcome for input psi_k (1-based) under the chosen mechanism;
/// the conclusive entry holds the projective readout's most likely guess.
std::array<UnambiguousOutcome, 2> unambiguous_outcomes(const SymmetricFamily& family,
                                                       Mechanism mechanism, int k);

}  // namespace qsd
