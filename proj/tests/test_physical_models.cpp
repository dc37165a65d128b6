#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "qsd/min_error.hpp"
#include "qsd/physical_models.hpp"
#include "test_support.hpp"

using namespace qsd;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const std::vector<cplx> kCoincident{0.5, kInvSqrt2, 0.5};
const std::vector<cplx> kAsym{0.7, 0.6, std::sqrt(0.15)};

Eigen::Index at(const FockBasis& b, const Occupation& occ, std::initializer_list<int> levels = {}) {
  const std::vector<int> lv(levels);
  return static_cast<Eigen::Index>(b.index_of(occ, lv));
}

// Bright-state reduction: the atom-field coupling only sees
// |B> = 3^{-1/2} sum_l |g_l>|u_l>, which Rabi-oscillates with |e>|0,0> at
// frequency sqrt(6) eta. Averaging sin^2 over the exponential waiting time:
// p = (|s|^2 / 3) * 12 eta^2 / (Gamma^2 + 24 eta^2), s = sum_l alpha_l beta_l.
double bright_state_oracle(double eta, double gamma, double overlap) {
  return overlap / 3.0 * 12.0 * eta * eta / (gamma * gamma + 24.0 * eta * eta);
}

}  // namespace

TEST_CASE("tpa_conditional_operator") {
  auto b = build_basis(2, 2);
  CHECK((tpa_conditional_operator(b, {0, 0}, 0.0).matrix() - CMatrix::Identity(6, 6)).norm() < 1e-15);

  const CMatrix t11 = tpa_conditional_operator(b, {0, 0}, std::log(2.0)).matrix();
  CHECK(std::abs(t11(at(*b, {2, 0}), at(*b, {2, 0})) - 0.5) < 1e-14);
  CHECK(std::abs(t11(at(*b, {1, 1}), at(*b, {1, 1})) - 1.0) < 1e-14);

  const CMatrix t12 = tpa_conditional_operator(b, {0, 1}, std::log(2.0)).matrix();
  CHECK(std::abs(t12(at(*b, {1, 1}), at(*b, {1, 1})) - kInvSqrt2) < 1e-14);
  CHECK(std::abs(t12(at(*b, {2, 0}), at(*b, {2, 0})) - 1.0) < 1e-14);

  CHECK_THROWS_AS(tpa_conditional_operator(b, {0, 0}, -0.1), Error);
}

TEST_CASE("tpa_schedule") {
  const auto s0 = tpa_schedule(make_family(3, 2, kCoincident));
  CHECK(s0.products[0] == doctest::Approx(0.0));
  CHECK(std::abs(s0.products[1] - std::log(2.0)) < 1e-14);

  const auto s1 = tpa_schedule(make_family(3, 2, kAsym));
  CHECK(std::abs(s1.products[0] - 0.5918850485042082) < 1e-13);
  CHECK(std::abs(s1.products[1] - 0.8754687373538997) < 1e-13);

  const double e = 1.0 / std::sqrt(3.0);
  const auto s2 = tpa_schedule(make_family(3, 2, {e, e, e}));
  CHECK(s2.products[0] == doctest::Approx(0.0));
  CHECK(s2.products[1] == doctest::Approx(0.0));

  try {
    tpa_schedule(make_family(3, 2, {0.4, 0.4, std::sqrt(0.68)}));
    FAIL("expected infeasible schedule");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kInfeasibleSchedule);
    CHECK(std::string(err.what()).find("|c_0|") != std::string::npos);
  }
}

TEST_CASE("sfg_unitary rotation blocks") {
  auto b = build_basis(2, 2, {2});
  CHECK((sfg_unitary(b, {0, 0}, 0, 0.0).matrix() - CMatrix::Identity(12, 12)).norm() < 1e-15);

  const CMatrix u11 = sfg_unitary(b, {0, 0}, 0, std::numbers::sqrt2 * std::numbers::pi / 2).matrix();
  CHECK(std::abs(std::abs(u11(at(*b, {0, 0}, {1}), at(*b, {2, 0}, {0}))) - 1.0) < 1e-12);
  CHECK(std::abs(u11(at(*b, {2, 0}, {0}), at(*b, {2, 0}, {0}))) < 1e-12);

  const CMatrix u12 = sfg_unitary(b, {0, 1}, 0, std::numbers::pi / 2).matrix();
  CHECK(std::abs(u12(at(*b, {1, 1}, {0}), at(*b, {1, 1}, {0})) - kInvSqrt2) < 1e-12);
  CHECK(unitarity_defect(u12) < 1e-12);
}

TEST_CASE("sfg_schedule") {
  const auto s0 = sfg_schedule(make_family(3, 2, kCoincident));
  CHECK(std::abs(s0.products[0]) < 1e-7);
  CHECK(std::abs(s0.products[1] - std::numbers::pi / 2) < 1e-14);

  const auto s1 = sfg_schedule(make_family(3, 2, kAsym));
  CHECK(std::abs(s1.products[0] - 1.3922870489217418) < 1e-13);
  CHECK(std::abs(s1.products[1] - 1.7382444060145856) < 1e-13);

  const double e = 1.0 / std::sqrt(3.0);
  const auto s2 = sfg_schedule(make_family(3, 2, {e, e, e}));
  CHECK(std::abs(s2.products[0]) < 1e-7);
  CHECK(std::abs(s2.products[1]) < 1e-7);

  CHECK_THROWS_AS(sfg_schedule(make_family(3, 2, {0.4, 0.4, std::sqrt(0.68)})), Error);
  CHECK_THROWS_AS((ChannelSchedule{Mechanism::kSfg, {0.0, 4.0}}.validate()), Error);
  CHECK_THROWS_AS((ChannelSchedule{Mechanism::kTpa, {-1.0, 0.0}}.validate()), Error);
}

TEST_CASE("property: SFG conserves Q = (fundamental photons)/2 + up-converted photons") {
  auto b = build_basis(2, 2, {2, 2});
  const auto dim = static_cast<Eigen::Index>(b->dimension());
  CMatrix q = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto lv = b->ancilla_levels_at(static_cast<std::size_t>(i));
    q(i, i) = 0.5 * b->total_photons_at(static_cast<std::size_t>(i)) + lv[0] + lv[1];
  }
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> prod(0.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const CMatrix ua = sfg_unitary(b, {0, 0}, 0, prod(rng)).matrix();
    const CMatrix ub = sfg_unitary(b, {0, 1}, 1, prod(rng)).matrix();
    CHECK((ua * q - q * ua).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ub * q - q * ub).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(unitarity_defect(ua) < 1e-10);
    CHECK(unitarity_defect(ub) < 1e-10);
  }
}

TEST_CASE("detector_atom_coefficients") {
  const auto f = make_family(3, 2, kCoincident);
  const auto alpha = detector_atom_coefficients(f, 3);
  for (const auto& a : alpha) CHECK(std::abs(a - 1.0 / std::sqrt(3.0)) < 1e-14);

  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    const int N = 3 + static_cast<int>(rng() % 4);
    const auto g = testing::random_family(rng, N, 2);
    auto b = build_basis(2, 2);
    const auto psi = family_states(g, b, two_photon_labels(*b));
    for (int k = 1; k <= N; ++k) {
      const auto a = detector_atom_coefficients(g, k);
      double n2 = 0.0;
      for (const auto& x : a) n2 += std::norm(x);
      CHECK(std::abs(n2 - 3.0 / N) < 1e-14);
      const auto ex = atom_excitation_avg(make_detector_model(g, k, 1.0, 1.0), psi[static_cast<std::size_t>(k - 1)]);
      CHECK(std::abs(ex.detection_overlap * 3.0 / N - success_probability_analytic(g)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(detector_atom_coefficients(f, 0), Error);
}

TEST_CASE("atom_excitation_avg examples") {
  auto b = build_basis(2, 2);
  const auto labels = two_photon_labels(*b);
  const double e = 1.0 / std::sqrt(3.0);

  SUBCASE("dark state never excites") {
    const auto model = make_atom_model(1.0, 0.5, {cplx(e), cplx(e), cplx(e)});
    CVector beta = CVector::Zero(6);
    beta(static_cast<Eigen::Index>(labels[0])) = kInvSqrt2;
    beta(static_cast<Eigen::Index>(labels[1])) = -kInvSqrt2;
    const auto ex = atom_excitation_avg(model, StateVector(b, beta, true));
    CHECK(std::abs(ex.numeric) < 1e-12);
    CHECK(std::abs(ex.analytic) < 1e-15);
  }

  SUBCASE("closed-form value at eta=1, Gamma=2 with unit overlap") {
    const auto model = make_atom_model(1.0, 2.0, {cplx(1.0), cplx(0.0), cplx(0.0)});
    const auto ex = atom_excitation_avg(model, StateVector::basis_state(b, labels[0]));
    CHECK(ex.detection_overlap == doctest::Approx(1.0));
    CHECK(std::abs(ex.analytic - 0.125) < 1e-15);
    // Numeric value tracks the bright-state oracle, not the closed form.
    CHECK(std::abs(ex.numeric - bright_state_oracle(1.0, 2.0, 1.0)) < 1e-9);
  }

  SUBCASE("Gamma = 0.01 eta approaches overlap / 6") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 5; ++t) {
      const auto a = testing::random_coeffs(rng, 2);
      const auto bc = testing::random_coeffs(rng, 2);
      const auto model = make_atom_model(1.0, 0.01, {a[0], a[1], a[2]});
      CVector beta = CVector::Zero(6);
      for (std::size_t l = 0; l < 3; ++l) beta(static_cast<Eigen::Index>(labels[l])) = bc[l];
      const auto ex = atom_excitation_avg(model, StateVector(b, beta, true));
      CHECK(std::abs(ex.numeric - ex.detection_overlap / 6.0) < 1e-3);
      CHECK(ex.quadrature_error < 1e-8);
    }
  }

  CHECK_THROWS_AS(make_atom_model(1.0, 0.0, {cplx(1.0), cplx(0.0), cplx(0.0)}), Error);
}

TEST_CASE("property: quadrature matches the bright-state oracle across a Gamma grid") {
  std::mt19937_64 rng(41);
  auto b = build_basis(2, 2);
  const auto labels = two_photon_labels(*b);
  for (double gamma : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    for (int t = 0; t < 3; ++t) {
      const auto a = testing::random_coeffs(rng, 2);
      const auto bc = testing::random_coeffs(rng, 2);
      const double eta = std::uniform_real_distribution<double>(0.3, 2.0)(rng);
      const auto model = make_atom_model(eta, gamma, {a[0], a[1], a[2]});
      CVector beta = CVector::Zero(6);
      for (std::size_t l = 0; l < 3; ++l) beta(static_cast<Eigen::Index>(labels[l])) = bc[l];
      const auto ex = atom_excitation_avg(model, StateVector(b, beta, true));
      CHECK(std::abs(ex.numeric - bright_state_oracle(eta, gamma, ex.detection_overlap)) < 1e-8);
    }
  }
}

TEST_CASE("property: detector prefactor is k- and state-independent") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 3; ++t) {
    const int N = 3 + t;
    const auto f = testing::random_family(rng, N, 2);
    auto b = build_basis(2, 2);
    const auto psi = family_states(f, b, two_photon_labels(*b));
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 1; k <= N; ++k) {
      const auto model = make_detector_model(f, k, 1.0, 0.3);
      for (const auto& s : psi) {
        const auto ex = atom_excitation_avg(model, s);
        if (ex.detection_overlap < 1e-6) continue;
        lo = std::min(lo, ex.numeric / ex.detection_overlap);
        hi = std::max(hi, ex.numeric / ex.detection_overlap);
      }
    }
    CHECK((hi - lo) / hi < 1e-6);
  }
}
