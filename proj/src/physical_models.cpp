#include "qsd/physical_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qsd {

namespace {

constexpr int kGround0 = 0;
constexpr int kExcited = 3;
constexpr double kWaitingHorizon = 50.0;  // T_max = 50 / Gamma

void require_two_photon(const SymmetricFamily& family) {
  if (family.M() != 2) {
    throw Error(ErrorCode::kInfeasibleSchedule, "channel schedules require M = 2");
  }
}

double ratio_or_throw(const SymmetricFamily& family, int l) {
  const double cl = std::abs(family.coeffs()[static_cast<std::size_t>(l)]);
  const double c2 = std::abs(family.coeffs()[2]);
  if (c2 > cl + kNormTolerance) {
    throw Error(ErrorCode::kInfeasibleSchedule,
                "|c_2| > |c_" + std::to_string(l) + "|: no nonnegative interaction time exists");
  }
  return std::min(1.0, c2 / cl);
}

CMatrix pair_lowering(const BasisPtr& basis, ModePair pair) {
  return annihilation_matrix(basis, pair.first).matrix() *
         annihilation_matrix(basis, pair.second).matrix();
}

}  // namespace

const char* to_string(Mechanism m) { return m == Mechanism::kTpa ? "tpa" : "sfg"; }

Mechanism mechanism_from_string(const std::string& s) {
  if (s == "tpa") return Mechanism::kTpa;
  if (s == "sfg") return Mechanism::kSfg;
  throw Error(ErrorCode::kInvalidArgument, "unknown mechanism '" + s + "'");
}

void ChannelSchedule::validate() const {
  for (double p : products) {
    if (!(p >= 0.0)) throw Error(ErrorCode::kInfeasibleSchedule, "negative interaction product");
  }
  if (mechanism == Mechanism::kSfg) {
    const double half_pi = std::numbers::pi / 2.0;
    if (products[0] / std::numbers::sqrt2 > half_pi + 1e-12 || products[1] / 2.0 > half_pi + 1e-12) {
      throw Error(ErrorCode::kInfeasibleSchedule, "SFG rotation angle outside [0, pi/2]");
    }
  }
}

AtomFieldModel make_atom_model(double eta, double gamma, std::array<cplx, 3> alpha) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "Gamma must be > 0");
  double n2 = 0.0;
  for (const auto& a : alpha) n2 += std::norm(a);
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::kNotNormalized, "atomic amplitudes must be normalized");
  }
  return AtomFieldModel{eta, gamma, alpha};
}

Operator tpa_conditional_operator(const BasisPtr& basis, ModePair pair, double product) {
  if (!(product >= 0.0)) {
    throw Error(ErrorCode::kInfeasibleSchedule, "TPA product must be nonnegative");
  }
  const CMatrix lower = pair_lowering(basis, pair);
  const Operator generator(basis, lower.adjoint() * lower, OperatorKind::kHermitian);
  return matrix_exponential(generator, cplx{-0.5 * product, 0.0});
}

ChannelSchedule tpa_schedule(const SymmetricFamily& family) {
  require_two_photon(family);
  const double r0 = ratio_or_throw(family, 0);
  const double r1 = ratio_or_throw(family, 1);
  ChannelSchedule s{Mechanism::kTpa, {-std::log(r0), -2.0 * std::log(r1)}};
  s.products[0] = std::max(0.0, s.products[0]);
  s.products[1] = std::max(0.0, s.products[1]);
  return s;
}

Operator sfg_unitary(const BasisPtr& basis, ModePair pair, int ancilla, double product) {
  if (!(product >= 0.0)) {
    throw Error(ErrorCode::kInfeasibleSchedule, "SFG product must be nonnegative");
  }
  const CMatrix b = ancilla_lowering(basis, ancilla).matrix();
  const CMatrix raise_pair = pair_lowering(basis, pair).adjoint();
  const CMatrix x = raise_pair * b;
  // H / kappa
  const CMatrix h = cplx{0.0, 0.5} * (x - x.adjoint());
  const Operator generator(basis, h, OperatorKind::kHermitian);
  return matrix_exponential(generator, cplx{0.0, -product});
}

ChannelSchedule sfg_schedule(const SymmetricFamily& family) {
  require_two_photon(family);
  const double r0 = ratio_or_throw(family, 0);
  const double r1 = ratio_or_throw(family, 1);
  ChannelSchedule s{Mechanism::kSfg, {std::numbers::sqrt2 * std::acos(r0), 2.0 * std::acos(r1)}};
  s.validate();
  return s;
}

AtomExcitation atom_excitation_avg(const AtomFieldModel& model, const StateVector& field_state) {
  if (!(model.gamma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "Gamma must be > 0");
  const auto& fb = *field_state.basis();
  if (!fb.ancilla_dims().empty()) {
    throw Error(ErrorCode::kBasisMismatch, "field state must not carry ancillas");
  }
  const auto labels = two_photon_labels(fb);
  std::array<cplx, 3> beta{};
  double inside = 0.0;
  for (std::size_t l = 0; l < 3; ++l) {
    beta[l] = field_state.amplitudes()(static_cast<Eigen::Index>(labels[l]));
    inside += std::norm(beta[l]);
  }
  if (std::abs(field_state.norm_squared() - inside) > kNormTolerance) {
    throw Error(ErrorCode::kOutsideSupport, "field state leaves the two-photon sector");
  }

  // Field (two modes, <= 2 photons) tensor atom {g0, g1, g2, e}.
  auto basis = build_basis(2, 2, {4});
  const CMatrix a1 = annihilation_matrix(basis, 0).matrix();
  const CMatrix a2 = annihilation_matrix(basis, 1).matrix();
  CMatrix h = ancilla_transition(basis, 0, kExcited, kGround0).matrix() * a1 * a1 +
              std::numbers::sqrt2 * ancilla_transition(basis, 0, kExcited, 1).matrix() * a1 * a2 +
              ancilla_transition(basis, 0, kExcited, 2).matrix() * a2 * a2;
  h *= model.eta;
  h += h.adjoint().eval();

  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  CVector initial = CVector::Zero(dim);
  const Occupation occs[3] = {{2, 0}, {1, 1}, {0, 2}};
  for (int l = 0; l < 3; ++l) {
    for (int m = 0; m < 3; ++m) {
      const int level[1] = {l};
      initial(static_cast<Eigen::Index>(basis->index_of(occs[m], level))) +=
          model.alpha[static_cast<std::size_t>(l)] * beta[static_cast<std::size_t>(m)];
    }
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector coeffs = es.eigenvectors().adjoint() * initial;
  const Eigen::VectorXd& evals = es.eigenvalues();

  // Only eigencomponents populated by the initial state contribute.
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (std::abs(coeffs(i)) > 1e-15) active.push_back(i);
  }
  std::vector<Eigen::Index> excited_rows;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (basis->ancilla_levels_at(static_cast<std::size_t>(i))[0] == kExcited) {
      excited_rows.push_back(i);
    }
  }
  const auto n_active = static_cast<Eigen::Index>(active.size());
  CMatrix w(static_cast<Eigen::Index>(excited_rows.size()), n_active);
  Eigen::VectorXd freq(n_active);
  CVector amp(n_active);
  for (Eigen::Index c = 0; c < n_active; ++c) {
    for (std::size_t r = 0; r < excited_rows.size(); ++r) {
      w(static_cast<Eigen::Index>(r), c) = es.eigenvectors()(excited_rows[r], active[static_cast<std::size_t>(c)]);
    }
    freq(c) = evals(active[static_cast<std::size_t>(c)]);
    amp(c) = coeffs(active[static_cast<std::size_t>(c)]);
  }

  const double g = model.gamma;
  auto integrand = [&](double t) {
    CVector phased(n_active);
    for (Eigen::Index i = 0; i < n_active; ++i) phased(i) = amp(i) * std::polar(1.0, -freq(i) * t);
    return g * std::exp(-g * t) * (w * phased).squaredNorm();
  };

  // Panels no longer than one period of the fastest beat frequency.
  const double spread =
      n_active > 0 ? std::max(freq.maxCoeff() - freq.minCoeff(), 1e-12) : 1e-12;
  const double t_max = kWaitingHorizon / g;
  const double period = 2.0 * std::numbers::pi / spread;
  const auto panels = static_cast<long>(std::ceil(t_max / std::min(period, t_max)));
  const double width = t_max / static_cast<double>(panels);

  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0, err_total = 0.0;
  for (long p = 0; p < panels; ++p) {
    double err = 0.0;
    const double a = width * static_cast<double>(p);
    total += gauss_kronrod<double, 31>::integrate(integrand, a, a + width, 3, 1e-12, &err);
    err_total += err;
  }

  AtomExcitation out;
  out.numeric = total;
  // Integrand is bounded by Gamma e^{-Gamma t}; the tail beyond t_max is at most e^{-50}.
  out.quadrature_error = err_total + std::exp(-kWaitingHorizon);
  cplx overlap{};
  for (std::size_t l = 0; l < 3; ++l) overlap += model.alpha[l] * beta[l];
  out.detection_overlap = std::norm(overlap);
  const double eta2 = model.eta * model.eta;
  out.analytic = 2.0 * eta2 / (g * g + 12.0 * eta2) * out.detection_overlap;
  return out;
}

std::array<cplx, 3> detector_atom_coefficients(const SymmetricFamily& family, int k) {
  if (family.M() != 2) throw Error(ErrorCode::kInvalidArgument, "detector atoms require M = 2");
  if (k < 1 || k > family.N()) {
    throw Error(ErrorCode::kInvalidArgument, "detector index k out of range 1..N");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(family.N()));
  std::array<cplx, 3> alpha{};
  for (int l = 0; l < 3; ++l) {
    const cplx c = family.coeffs()[static_cast<std::size_t>(l)];
    alpha[static_cast<std::size_t>(l)] =
        scale * std::conj(c) / std::abs(c) *
        std::polar(1.0, -2.0 * std::numbers::pi * k * l / static_cast<double>(family.N()));
  }
  return alpha;
}

AtomFieldModel make_detector_model(const SymmetricFamily& family, int k, double eta,
                                   double gamma) {
  auto alpha = detector_atom_coefficients(family, k);
  const double rescale = std::sqrt(static_cast<double>(family.N()) / 3.0);
  for (auto& a : alpha) a *= rescale;
  return make_atom_model(eta, gamma, alpha);
}

}  // namespace qsd
