#pragma once

// Error-minimizing square-root measurement for symmetric families.

#include <vector>

#include "qsd/symmetric_states.hpp"

namespace qsd {

struct DetectionSet {
  std::vector<StateVector> vectors;  ///< mu_1..mu_N, <mu_k|psi_k> real positive
  Operator support;                  ///< projector onto the family span
  double completeness_residual = 0.0;
  bool orthogonal = false;
};

/// Phi = sum_k |psi_k><psi_k|
Operator gram_sum_operator(const std::vector<StateVector>& states);

/// mu_k = Phi^{-1/2} |psi_k> on the support of Phi.
DetectionSet srm_states_numeric(const std::vector<StateVector>& states);

/// mu_k = N^{-1/2} sum_l (c_l/|c_l|) e^{i 2 pi l k/N} |u_l>.
DetectionSet srm_states_closed(const SymmetricFamily& family, const BasisPtr& basis,
                               const std::vector<std::size_t>& labels);

/// <mu_j|mu_k> for j != k from the geometric-sum closed form (depends on k - j only).
cplx closed_form_detection_overlap(int N, int M, int k_minus_j);

/// P_C = (1/N) (sum_l |c_l|)^2
double success_probability_analytic(const SymmetricFamily& family);

/// (1/N) sum_k |<mu_k|psi_k>|^2
double success_probability_from_detection(const DetectionSet& detection,
                                          const std::vector<StateVector>& states);

/// p(j) = |<mu_j|state>|^2, j = 1..N (index j-1). Rejects states with
/// support leakage above 1e-9.
std::vector<double> outcome_distribution(const DetectionSet& detection, const StateVector& state);

/// Gram matrix G_jk = <mu_j|mu_k>.
CMatrix detection_overlaps(const DetectionSet& detection);

}  // namespace qsd
