#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "qsd/fock.hpp"
#include "test_support.hpp"

using namespace qsd;

TEST_CASE("build_basis enumerates by photon number then tuple") {
  auto b = build_basis(2, 2);
  const std::vector<Occupation> expected{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  CHECK(b->occupations() == expected);
  CHECK(b->dimension() == 6);

  auto vac = build_basis(1, 0);
  REQUIRE(vac->occupation_count() == 1);
  CHECK(vac->occupations()[0] == Occupation{0});

  CHECK(build_basis(2, 2, {2, 2})->dimension() == 24);
}

TEST_CASE("build_basis rejects bad parameters") {
  CHECK_THROWS_AS(build_basis(0, 2), Error);
  CHECK_THROWS_AS(build_basis(2, -1), Error);
  CHECK_THROWS_AS(build_basis(2, 2, {0}), Error);
}

TEST_CASE("enumeration is deterministic and index_of inverts occupation_at") {
  auto a = build_basis(3, 3, {2, 3});
  auto b = build_basis(3, 3, {2, 3});
  CHECK(a->occupations() == b->occupations());
  for (std::size_t i = 0; i < a->dimension(); ++i) {
    const auto levels = a->ancilla_levels_at(i);
    CHECK(a->index_of(a->occupation_at(i), levels) == i);
  }
}

TEST_CASE("ladder algebra") {
  auto b = build_basis(2, 2);
  const CMatrix a1 = annihilation_matrix(b, 0).matrix();
  const CMatrix a2 = annihilation_matrix(b, 1).matrix();
  const CVector s20 = StateVector::basis_state(b, b->index_of({2, 0})).amplitudes();
  const CVector s11 = StateVector::basis_state(b, b->index_of({1, 1})).amplitudes();
  const CVector vac = StateVector::basis_state(b, b->index_of({0, 0})).amplitudes();

  CHECK((a1 * (a1 * s20) - std::numbers::sqrt2 * vac).norm() < 1e-14);
  CHECK((a1 * (a2 * s11) - vac).norm() < 1e-14);

  SUBCASE("commutator is identity below the cutoff") {
    auto big = build_basis(2, 4);
    const CMatrix a = annihilation_matrix(big, 0).matrix();
    const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
    for (std::size_t i = 0; i < big->dimension(); ++i) {
      if (big->total_photons_at(i) >= big->max_total_photons()) continue;
      for (std::size_t j = 0; j < big->dimension(); ++j) {
        if (big->total_photons_at(j) >= big->max_total_photons()) continue;
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(comm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - expected) <
              1e-12);
      }
    }
  }

  SUBCASE("ladder operators act as identity on ancillas") {
    auto anc = build_basis(2, 2, {3});
    const CMatrix a = annihilation_matrix(anc, 1).matrix();
    const int lvl[1] = {2};
    const auto from = anc->index_of({1, 1}, lvl);
    const auto to = anc->index_of({1, 0}, lvl);
    CHECK(std::abs(a(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) - 1.0) < 1e-15);
  }

  CHECK_THROWS_AS(annihilation_matrix(b, 2), Error);
}

TEST_CASE("ancilla operators") {
  auto b = build_basis(1, 1, {2, 4});
  const CMatrix lower = ancilla_lowering(b, 0).matrix();
  const int up[2] = {1, 3};
  const int down[2] = {0, 3};
  CHECK(std::abs(lower(static_cast<Eigen::Index>(b->index_of({1}, down)),
                       static_cast<Eigen::Index>(b->index_of({1}, up))) -
                 1.0) < 1e-15);
  const CMatrix t = ancilla_transition(b, 1, 3, 0).matrix();
  const int g[2] = {1, 0};
  const int e[2] = {1, 3};
  CHECK(t(static_cast<Eigen::Index>(b->index_of({0}, e)), static_cast<Eigen::Index>(b->index_of({0}, g))) ==
        cplx{1.0, 0.0});
  CHECK(t.cwiseAbs().sum() == doctest::Approx(static_cast<double>(b->occupation_count() * 2)));
  CHECK_THROWS_AS(ancilla_lowering(b, 2), Error);
  CHECK_THROWS_AS(ancilla_transition(b, 1, 4, 0), Error);
}

TEST_CASE("operator kind tags are verified") {
  auto b = build_basis(1, 1);
  CMatrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(Operator(b, m, OperatorKind::kHermitian), Error);
  CHECK_THROWS_AS(Operator(b, m, OperatorKind::kUnitary), Error);
  CHECK_NOTHROW(Operator(b, m, OperatorKind::kGeneral));
  CHECK_THROWS_AS(Operator(b, CMatrix::Identity(3, 3), OperatorKind::kGeneral), Error);
}

TEST_CASE("state vector norm invariant") {
  auto b = build_basis(1, 1);
  CVector v(2);
  v << 0.6, 0.8;
  CHECK_NOTHROW(StateVector(b, v, true));
  CHECK_THROWS_AS(StateVector(b, 2.0 * v, false), Error);
  CHECK_THROWS_AS(StateVector(b, 0.5 * v, true), Error);
  CHECK_NOTHROW(StateVector(b, 0.5 * v, false));
}

TEST_CASE("matrix_exponential") {
  auto b = build_basis(1, 1);
  CMatrix sigma(2, 2);
  sigma << 0, 1, 1, 0;
  const Operator x(b, sigma, OperatorKind::kHermitian);

  CHECK((matrix_exponential(x, 0.0).matrix() - CMatrix::Identity(2, 2)).norm() == 0.0);

  const double theta = 0.731;
  const CMatrix analytic = std::cos(theta) * CMatrix::Identity(2, 2) - cplx{0, std::sin(theta)} * sigma;
  const Operator u = matrix_exponential(x, cplx{0, -theta});
  CHECK(u.kind() == OperatorKind::kUnitary);
  CHECK((u.matrix() - analytic).cwiseAbs().maxCoeff() < 1e-14);

  SUBCASE("general exponent matches the analytic nilpotent series") {
    CMatrix n(2, 2);
    n << 0, 2, 0, 0;
    const Operator nil(b, n, OperatorKind::kGeneral);
    CMatrix expected = CMatrix::Identity(2, 2) + cplx{0.5, 0.25} * n;
    CHECK((matrix_exponential(nil, cplx{0.5, 0.25}).matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("anti-Hermitian exponent with real scalar is unitary") {
    CMatrix ah = cplx{0, 1} * sigma;
    const Operator op(b, ah, OperatorKind::kGeneral);
    const Operator e = matrix_exponential(op, 0.4);
    CHECK(unitarity_defect(e.matrix()) < 1e-12);
  }
}

TEST_CASE("sum-frequency rotation block: full conversion at a quarter period") {
  // |1,1>|0>_B <-> |0,0>|1>_B under H = (i/2)(a1^dag a2^dag b - a1 a2 b^dag).
  auto b = build_basis(2, 2, {2});
  const CMatrix pair = annihilation_matrix(b, 0).matrix() * annihilation_matrix(b, 1).matrix();
  const CMatrix x = pair.adjoint() * ancilla_lowering(b, 0).matrix();
  const Operator h(b, cplx{0, 0.5} * (x - x.adjoint()), OperatorKind::kHermitian);
  const double product = std::numbers::pi;  // kappa T / 2 = pi / 2
  const Operator u = matrix_exponential(h, cplx{0, -product});

  const int l0[1] = {0};
  const int l1[1] = {1};
  const auto in = static_cast<Eigen::Index>(b->index_of({1, 1}, l0));
  const auto out = static_cast<Eigen::Index>(b->index_of({0, 0}, l1));
  CHECK(std::abs(std::abs(u.matrix()(out, in)) - 1.0) < 1e-12);
  CHECK(std::abs(u.matrix()(in, in)) < 1e-12);

  // Independent route: Pade scaling-and-squaring on the same generator.
  const CMatrix pade = (cplx{0, -product} * h.matrix()).exp();
  CHECK((pade - u.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("exponential unitarity for random Hermitian generators") {
  std::mt19937_64 rng(7);
  auto b = build_basis(2, 3);  // dimension 10
  for (int trial = 0; trial < 25; ++trial) {
    const Operator h(b, testing::random_hermitian(rng, 10), OperatorKind::kHermitian);
    const double t = std::uniform_real_distribution<double>(-5, 5)(rng);
    CHECK(unitarity_defect(matrix_exponential(h, cplx{0, -t}).matrix()) < 1e-10);
  }
}

TEST_CASE("inv_sqrt_psd examples") {
  auto b = build_basis(1, 1);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  const auto r = inv_sqrt_psd(Operator(b, d, OperatorKind::kHermitian));
  CHECK(std::abs(r.inverse_sqrt.matrix()(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(r.inverse_sqrt.matrix()(1, 1) - 1.0) < 1e-15);
  CHECK(r.rank == 2);

  const auto id = inv_sqrt_psd(Operator::identity(b));
  CHECK((id.inverse_sqrt.matrix() - CMatrix::Identity(2, 2)).norm() < 1e-15);

  CMatrix non_herm(2, 2);
  non_herm << 1, 1, 0, 1;
  CHECK_THROWS_AS(inv_sqrt_psd(Operator(b, non_herm, OperatorKind::kGeneral)), Error);
}

TEST_CASE("inv_sqrt_psd of a Gram sum: diag(1/sqrt(3/4), 1/sqrt(3/2), 1/sqrt(3/4))") {
  // Brute-force Phi = sum_k |psi_k><psi_k| for c = (1/2, 1/sqrt2, 1/2), N = 3 in a
  // bare 3-dimensional u-basis, built without the family module.
  auto b = build_basis(1, 2);
  const std::vector<double> c{0.5, 1.0 / std::numbers::sqrt2, 0.5};
  CMatrix phi = CMatrix::Zero(3, 3);
  for (int k = 1; k <= 3; ++k) {
    CVector psi(3);
    for (int l = 0; l < 3; ++l) psi(l) = c[l] * std::polar(1.0, 2 * std::numbers::pi * l * k / 3.0);
    phi += psi * psi.adjoint();
  }
  const auto r = inv_sqrt_psd(Operator(b, 0.5 * (phi + phi.adjoint()), OperatorKind::kHermitian));
  CMatrix expected = CMatrix::Zero(3, 3);
  expected(0, 0) = 1.0 / std::sqrt(0.75);
  expected(1, 1) = 1.0 / std::sqrt(1.5);
  expected(2, 2) = 1.0 / std::sqrt(0.75);
  CHECK((r.inverse_sqrt.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("inv_sqrt_psd: R A R is the support projector for random PSD matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 11);  // 2..12
    const int rank = 1 + static_cast<int>(rng() % static_cast<unsigned>(dim));
    auto b = build_basis(1, dim - 1);
    std::normal_distribution<double> g;
    CMatrix x(dim, rank);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < rank; ++c) x(r, c) = cplx{g(rng), g(rng)};
    CMatrix a = x * x.adjoint();
    a = 0.5 * (a + a.adjoint()).eval();
    const auto res = inv_sqrt_psd(Operator(b, a, OperatorKind::kHermitian));
    CHECK(res.rank == rank);
    const CMatrix rar = res.inverse_sqrt.matrix() * a * res.inverse_sqrt.matrix();
    CHECK((rar - res.support_projector.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    // The projector is idempotent with trace = rank.
    const CMatrix& p = res.support_projector.matrix();
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(p.trace().real() - rank) < 1e-10);
  }
}

TEST_CASE("ladder consistency: creation matrix is the adjoint of annihilation") {
  auto b = build_basis(3, 3, {2});
  for (int mode = 0; mode < 3; ++mode) {
    const CMatrix a = annihilation_matrix(b, mode).matrix();
    const CMatrix a_dag = annihilation_matrix(b, mode).adjoint().matrix();
    for (Eigen::Index m = 0; m < a.rows(); ++m)
      for (Eigen::Index n = 0; n < a.cols(); ++n) CHECK(a_dag(m, n) == std::conj(a(n, m)));
  }
}
