#pragma once

// Physical mechanisms acting on two-photon polarization states:
//  - conditional (no-absorption) evolution under two-photon absorption,
//  - sum-frequency generation into truncated up-converted modes,
//  - the four-level detector atom driven by two-photon transitions.
// hbar = 1; couplings and interaction times enter only as products.

#include <array>
#include <string>
#include <utility>

#include "qsd/symmetric_states.hpp"

namespace qsd {

/// Pair of fundamental modes, 0-based: {0,0} couples a1 a1, {0,1} couples a1 a2.
struct ModePair {
  int first = 0;
  int second = 0;
};

enum class Mechanism { kTpa, kSfg };

const char* to_string(Mechanism m);
Mechanism mechanism_from_string(const std::string& s);

/// Products (gamma11*T0, gamma12*T1) for TPA or (kappa11*T0, kappa12*T1) for SFG.
struct ChannelSchedule {
  Mechanism mechanism = Mechanism::kTpa;
  std::array<double, 2> products{};

  /// Throws kInfeasibleSchedule on negative products or SFG angles outside
  /// the principal arccos branch.
  void validate() const;
};

struct AtomFieldModel {
  double eta = 1.0;
  double gamma = 1.0;
  std::array<cplx, 3> alpha{};
};

/// Validates Gamma > 0 and sum |alpha_l|^2 = 1.
AtomFieldModel make_atom_model(double eta, double gamma, std::array<cplx, 3> alpha);

/// exp(-(product/2) a_i^dag a_j^dag a_i a_j), the no-jump propagator.
Operator tpa_conditional_operator(const BasisPtr& basis, ModePair pair, double product);

/// gamma11*T0 = ln(|c0|/|c2|), gamma12*T1 = 2 ln(|c1|/|c2|).
ChannelSchedule tpa_schedule(const SymmetricFamily& family);

/// exp(-i H t) with H = (i kappa/2)(a_i^dag a_j^dag b - a_i a_j b^dag), where b
/// lowers ancilla factor `ancilla` and kappa*t = product.
Operator sfg_unitary(const BasisPtr& basis, ModePair pair, int ancilla, double product);

/// Principal branch: kappa11*T0 = sqrt2 acos(|c2|/|c0|), kappa12*T1 = 2 acos(|c2|/|c1|).
ChannelSchedule sfg_schedule(const SymmetricFamily& family);

struct AtomExcitation {
  double numeric = 0.0;            ///< waiting-time average by quadrature
  double analytic = 0.0;           ///< 2 eta^2/(Gamma^2 + 12 eta^2) |sum alpha beta|^2
  double detection_overlap = 0.0;  ///< |sum_l alpha_l beta_l|^2
  double quadrature_error = 0.0;   ///< estimated, including the truncated tail
};

/// Gamma * int_0^inf e^{-Gamma t} P_e(t) dt, with P_e the excited-level
/// population of exp(-iHt)(|chi>|psi>). `field_state` lives on a two-mode
/// basis without ancillas and must be confined to the two-photon sector.
AtomExcitation atom_excitation_avg(const AtomFieldModel& model, const StateVector& field_state);

/// Atomic superposition amplitudes that make the excitation probability track
/// |<mu_k|psi>|^2 (k is 1-based). The norm squared is 3/N.
std::array<cplx, 3> detector_atom_coefficients(const SymmetricFamily& family, int k);

/// detector_atom_coefficients rescaled to a normalized atomic state.
AtomFieldModel make_detector_model(const SymmetricFamily& family, int k, double eta,
                                   double gamma);

}  // namespace qsd
