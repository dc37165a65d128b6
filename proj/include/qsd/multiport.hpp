#pragma once

// N-port linear-optical network that discriminates symmetric single-photon
// states c0|1,0> + c1 e^{i2pi k/N}|0,1> with minimum error: the two modes
// enter ports 1 and 2 and a click at output port j is read as "state j".

#include <vector>

#include "qsd/symmetric_states.hpp"

namespace qsd {

struct MultiportUnitary {
  int N = 0;
  CMatrix matrix;            ///< N x N, rows = output ports, cols = input ports
  double phase_offset = 0.0; ///< Arg c1 - Arg c0
};

/// U_j1 = e^{i(arg_c1 - arg_c0)}/sqrt N, U_jr = e^{-i2pi j(r-1)/N}/sqrt N (r >= 2).
MultiportUnitary build_multiport(int N, double arg_c0, double arg_c1);

/// Multiport matched to a single-photon family.
MultiportUnitary build_multiport(const SymmetricFamily& family);

/// Input amplitudes (c0, c1 e^{i2pi k/N}, 0, ..., 0) for state xi_k, k 1-based.
CVector single_photon_input(const SymmetricFamily& family, int k);

/// p(j) = |sum_r U_jr d_r|^2, j = 1..N (index j-1).
std::vector<double> output_distribution(const MultiportUnitary& u, const CVector& input);

/// (1/N)[1 + 2|c0||c1| cos(2pi(k-j)/N)]
double output_probability_closed_form(const SymmetricFamily& family, int k, int j);

struct SinglePhotonDiscrimination {
  double P_C = 0.0;
  Eigen::MatrixXd table;  ///< table(k-1, j-1) = p(j|k)
};

SinglePhotonDiscrimination min_error_single_photon(const SymmetricFamily& family);

}  // namespace qsd
