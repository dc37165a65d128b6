#include "qsd/unambiguous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qsd {

namespace {

constexpr int kAncillaA = 0;
constexpr int kAncillaB = 1;
constexpr double kBranchTolerance = 1e-12;

void require_three_state_two_photon(const SymmetricFamily& family) {
  if (family.N() != 3 || family.M() != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "orthogonalization mechanisms are defined for N = 3, M = 2 families");
  }
}

cplx phase_of(cplx c) { return c / std::abs(c); }

bool all_magnitudes_equal(const SymmetricFamily& family) {
  const double lo = family.min_abs_coeff();
  for (const auto& c : family.coeffs()) {
    if (std::abs(c) - lo > 1e-12) return false;
  }
  return true;
}

}  // namespace

double success_probability_ud(const SymmetricFamily& family) {
  if (!family.linearly_independent()) {
    throw Error(ErrorCode::kLinearlyDependent,
                "unambiguous discrimination requires linearly independent states (N = M+1)");
  }
  const double lo = family.min_abs_coeff();
  const double pd = static_cast<double>(family.N()) * lo * lo;
  const double pc = success_probability_analytic(family);
  if (!all_magnitudes_equal(family) && !(pd < pc)) {
    throw Error(ErrorCode::kInvalidArgument, "P_D < P_C violated for a nonorthogonal family");
  }
  return pd;
}

TpaOrthogonalization orthogonalize_tpa(const SymmetricFamily& family) {
  require_three_state_two_photon(family);
  const ChannelSchedule schedule = tpa_schedule(family);
  auto basis = build_basis(2, 2);
  const auto labels = two_photon_labels(*basis);
  const Operator same_mode = tpa_conditional_operator(basis, {0, 0}, schedule.products[0]);
  const Operator paired = tpa_conditional_operator(basis, {0, 1}, schedule.products[1]);
  const Operator channel = paired * same_mode;

  TpaOrthogonalization out{schedule, {}, {}, {}};
  for (const auto& psi : family_states(family, basis, labels)) {
    StateVector conditioned = channel.apply(psi);
    const double p = conditioned.norm_squared();
    out.success.push_back(p);
    out.jump_probability.push_back(1.0 - p);
    out.states.push_back(std::move(conditioned));
  }
  return out;
}

SfgOrthogonalization orthogonalize_sfg(const SymmetricFamily& family, SfgOrder order) {
  require_three_state_two_photon(family);
  const ChannelSchedule schedule = sfg_schedule(family);
  auto enlarged = build_basis(2, 2, {2, 2});
  auto fundamental = build_basis(2, 2);
  auto upconverted = build_basis(1, 0, {2, 2});

  const Operator type1 = sfg_unitary(enlarged, {0, 0}, kAncillaA, schedule.products[0]);
  const Operator type2 = sfg_unitary(enlarged, {0, 1}, kAncillaB, schedule.products[1]);
  const Operator evolution = order == SfgOrder::kPairedFirst ? type1 * type2 : type2 * type1;

  const int vacuum_levels[2] = {0, 0};
  const std::vector<std::size_t> labels{enlarged->index_of({2, 0}, vacuum_levels),
                                        enlarged->index_of({1, 1}, vacuum_levels),
                                        enlarged->index_of({0, 2}, vacuum_levels)};
  const int a_levels[2] = {1, 0};
  const int b_levels[2] = {0, 1};
  const auto idx_a = static_cast<Eigen::Index>(enlarged->index_of({0, 0}, a_levels));
  const auto idx_b = static_cast<Eigen::Index>(enlarged->index_of({0, 0}, b_levels));
  const auto up_a = static_cast<Eigen::Index>(upconverted->index_of({0}, a_levels));
  const auto up_b = static_cast<Eigen::Index>(upconverted->index_of({0}, b_levels));

  SfgOrthogonalization out;
  out.schedule = schedule;
  out.enlarged_basis = enlarged;
  out.upconverted_basis = upconverted;

  for (const auto& psi : family_states(family, enlarged, labels)) {
    StateVector total = evolution.apply(psi);
    const CVector& amp = total.amplitudes();

    CVector conclusive = CVector::Zero(static_cast<Eigen::Index>(fundamental->dimension()));
    for (std::size_t i = 0; i < fundamental->occupation_count(); ++i) {
      const auto& occ = fundamental->occupations()[i];
      conclusive(static_cast<Eigen::Index>(i)) =
          amp(static_cast<Eigen::Index>(enlarged->index_of(occ, vacuum_levels)));
    }
    CVector xi = CVector::Zero(static_cast<Eigen::Index>(upconverted->dimension()));
    xi(up_a) = amp(idx_a);
    xi(up_b) = amp(idx_b);

    const double p_conclusive = conclusive.squaredNorm();
    const double p_inconclusive = xi.squaredNorm();
    out.leakage = std::max(out.leakage, std::abs(total.norm_squared() - p_conclusive - p_inconclusive));
    out.inconclusive_probability.push_back(p_inconclusive);
    out.conclusive.emplace_back(fundamental, std::move(conclusive),
                                std::abs(p_conclusive - 1.0) <= kNormTolerance);
    out.inconclusive.emplace_back(upconverted, std::move(xi),
                                  std::abs(p_inconclusive - 1.0) <= kNormTolerance);
    out.total.push_back(std::move(total));
  }
  return out;
}

std::array<cplx, 2> expected_inconclusive_amplitudes(const SymmetricFamily& family, int k) {
  require_three_state_two_photon(family);
  const auto& c = family.coeffs();
  const double a0 = std::abs(c[0]), a1 = std::abs(c[1]), a2 = std::abs(c[2]);
  const cplx relative = phase_of(c[1]) / phase_of(c[0]);
  return {cplx{std::sqrt(std::max(0.0, a0 * a0 - a2 * a2)), 0.0},
          relative * std::sqrt(std::max(0.0, a1 * a1 - a2 * a2)) *
              std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0)};
}

CVector align_global_phase(const CVector& v, const CVector& reference) {
  const cplx overlap = v.dot(reference);  // <v|reference>
  if (std::abs(overlap) == 0.0) return v;
  return v * (overlap / std::abs(overlap));
}

double inconclusive_residual(const SymmetricFamily& family, const SfgOrthogonalization& sfg) {
  const auto& up = sfg.upconverted_basis;
  const int a_levels[2] = {1, 0};
  const int b_levels[2] = {0, 1};
  const auto up_a = static_cast<Eigen::Index>(up->index_of({0}, a_levels));
  const auto up_b = static_cast<Eigen::Index>(up->index_of({0}, b_levels));
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const auto expected_amp = expected_inconclusive_amplitudes(family, k);
    CVector expected = CVector::Zero(static_cast<Eigen::Index>(up->dimension()));
    expected(up_a) = expected_amp[0];
    expected(up_b) = expected_amp[1];
    const CVector& simulated = sfg.inconclusive[static_cast<std::size_t>(k - 1)].amplitudes();
    worst = std::max(worst, (align_global_phase(simulated, expected) - expected).norm());
  }
  return worst;
}

std::vector<double> projective_discriminate(const std::vector<StateVector>& orthogonal_states,
                                            const StateVector& input) {
  if (orthogonality_residual(orthogonal_states) > kNormTolerance) {
    throw Error(ErrorCode::kNotOrthogonal, "projective readout needs mutually orthogonal states");
  }
  const double in_norm = input.norm();
  if (in_norm == 0.0) throw Error(ErrorCode::kInvalidArgument, "zero input state");
  std::vector<double> p;
  for (const auto& s : orthogonal_states) {
    p.push_back(std::norm(s.inner(input)) / (s.norm_squared() * in_norm * in_norm));
  }
  return p;
}

double orthogonality_residual(const std::vector<StateVector>& states) {
  double worst = 0.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    for (std::size_t k = j + 1; k < states.size(); ++k) {
      const double denom = states[j].norm() * states[k].norm();
      if (denom == 0.0) throw Error(ErrorCode::kInvalidArgument, "zero state in set");
      worst = std::max(worst, std::abs(states[j].inner(states[k])) / denom);
    }
  }
  return worst;
}

RecoveredFamily inconclusive_family(const SymmetricFamily& family) {
  require_three_state_two_photon(family);
  const auto& c = family.coeffs();
  const double a0 = std::abs(c[0]), a1 = std::abs(c[1]), a2 = std::abs(c[2]);
  if (!(a0 > a2 + kBranchTolerance) || !(a1 > a2 + kBranchTolerance)) return {};
  const double p_inconclusive = 1.0 - 3.0 * a2 * a2;
  const double norm = std::sqrt(p_inconclusive);
  std::vector<cplx> coeffs{phase_of(c[0]) * std::sqrt(a0 * a0 - a2 * a2) / norm,
                           phase_of(c[1]) * std::sqrt(a1 * a1 - a2 * a2) / norm};
  return {make_family(3, 1, std::move(coeffs))};
}

std::vector<StateVector> orthogonalize_filter(const SymmetricFamily& family, const BasisPtr& basis,
                                              const std::vector<std::size_t>& labels) {
  if (!family.linearly_independent()) {
    throw Error(ErrorCode::kLinearlyDependent, "orthogonalizing filter needs N = M+1");
  }
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  CMatrix filter = CMatrix::Identity(dim, dim);
  const double lo = family.min_abs_coeff();
  for (int l = 0; l <= family.M(); ++l) {
    const auto i = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(l)]);
    filter(i, i) = lo / std::abs(family.coeffs()[static_cast<std::size_t>(l)]);
  }
  const Operator op(basis, std::move(filter), OperatorKind::kHermitian);
  std::vector<StateVector> out;
  for (const auto& psi : family_states(family, basis, labels)) out.push_back(op.apply(psi));
  return out;
}

double equivalence_check(const SymmetricFamily& family) {
  const double pd = success_probability_ud(family);
  BasisPtr basis;
  std::vector<std::size_t> labels;
  std::vector<StateVector> filtered;
  const auto& c = family.coeffs();
  const bool tpa_feasible = family.N() == 3 && family.M() == 2 &&
                            std::abs(c[2]) <= std::min(std::abs(c[0]), std::abs(c[1])) + kNormTolerance;
  if (tpa_feasible) {
    basis = build_basis(2, 2);
    labels = two_photon_labels(*basis);
    filtered = orthogonalize_tpa(family).states;
  } else {
    basis = build_basis(1, family.M());
    for (int l = 0; l <= family.M(); ++l) labels.push_back(static_cast<std::size_t>(l));
    filtered = orthogonalize_filter(family, basis, labels);
  }
  const DetectionSet mus = srm_states_closed(family, basis, labels);
  double worst = 0.0;
  for (std::size_t k = 0; k < filtered.size(); ++k) {
    worst = std::max(worst, (filtered[k].amplitudes() -
                             std::sqrt(pd) * mus.vectors[k].amplitudes()).norm());
  }
  return worst;
}

std::array<UnambiguousOutcome, 2> unambiguous_outcomes(const SymmetricFamily& family,
                                                       Mechanism mechanism, int k) {
  require_three_state_two_photon(family);
  if (k < 1 || k > 3) throw Error(ErrorCode::kInvalidArgument, "k out of range 1..3");
  const auto idx = static_cast<std::size_t>(k - 1);

  std::vector<StateVector> conclusive_states;
  double p_conclusive = 0.0;
  std::optional<StateVector> inconclusive_state;
  if (mechanism == Mechanism::kTpa) {
    auto tpa = orthogonalize_tpa(family);
    p_conclusive = tpa.success[idx];
    conclusive_states = std::move(tpa.states);
    // After a pair absorption the field is vacuum.
    auto basis = conclusive_states.front().basis();
    inconclusive_state = StateVector::basis_state(basis, basis->index_of({0, 0}));
  } else {
    auto sfg = orthogonalize_sfg(family);
    p_conclusive = 1.0 - sfg.inconclusive_probability[idx];
    const auto& xi = sfg.inconclusive[idx];
    if (xi.norm() > 0.0) {
      inconclusive_state = StateVector::normalized_from(xi.basis(), xi.amplitudes());
    } else {
      inconclusive_state = StateVector::basis_state(xi.basis(), 0);
    }
    conclusive_states = std::move(sfg.conclusive);
  }

  const auto& branch = conclusive_states[idx];
  const auto p = projective_discriminate(conclusive_states, branch);
  const int guess = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()) + 1;
  UnambiguousOutcome conclusive{OutcomeKind::kConclusive, guess,
                                StateVector::normalized_from(branch.basis(), branch.amplitudes()),
                                p_conclusive};
  UnambiguousOutcome inconclusive{OutcomeKind::kInconclusive, std::nullopt,
                                  std::move(*inconclusive_state), 1.0 - p_conclusive};
  return {std::move(conclusive), std::move(inconclusive)};
}

}  // namespace qsd
