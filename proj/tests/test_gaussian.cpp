#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <random>

#include "optomech/dynamics.hpp"
#include "optomech/gaussian.hpp"

using namespace optomech;

namespace {

Eigen::MatrixXd random_valid_cm(std::mt19937& rng, int modes, double spread = 0.7) {
  std::normal_distribution<double> dist(0.0, spread);
  const int n = 2 * modes;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
  // vacuum + positive semidefinite noise is always a valid CM
  return 0.5 * Eigen::MatrixXd::Identity(n, n) + m * m.transpose();
}

Eigen::MatrixXd tms_cm(double sq) {
  const double ch = std::cosh(2.0 * sq) / 2.0;
  const double sh = std::sinh(2.0 * sq) / 2.0;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
  v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = ch;
  v(0, 2) = v(2, 0) = sh;
  v(1, 3) = v(3, 1) = -sh;
  return v;
}

// Brute-force oracle: eigenvalues of the complex Hermitian test matrix.
double complex_test_matrix_min_eig(const CovarianceMatrix& v, int mode) {
  const Eigen::MatrixXd w = partial_transpose(v, mode).matrix();
  const Eigen::MatrixXd j = symplectic_form(v.n_modes());
  Eigen::MatrixXcd t = w.cast<std::complex<double>>();
  t += std::complex<double>(0.0, 0.5) * j.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t, Eigen::EigenvaluesOnly);
  REQUIRE(es.info() == Eigen::Success);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("symplectic form blocks and J^2 = -I") {
  const Eigen::MatrixXd j1 = symplectic_form(1);
  CHECK(j1(0, 1) == 1.0);
  CHECK(j1(1, 0) == -1.0);
  CHECK(j1(0, 0) == 0.0);

  const Eigen::MatrixXd j2 = symplectic_form(2);
  CHECK(j2.rows() == 4);
  CHECK(j2(2, 3) == 1.0);
  CHECK(j2(3, 2) == -1.0);
  CHECK(j2(0, 2) == 0.0);

  for (int n = 1; n <= 4; ++n) {
    const Eigen::MatrixXd j = symplectic_form(n);
    CHECK(((j * j) + Eigen::MatrixXd::Identity(2 * n, 2 * n)).norm() == 0.0);
    CHECK((j + j.transpose()).norm() == 0.0);
  }
  CHECK_THROWS_AS(symplectic_form(0), std::invalid_argument);
}

TEST_CASE("covariance matrix construction") {
  CHECK(CovarianceMatrix::vacuum(3).matrix().isApprox(
      0.5 * Eigen::MatrixXd::Identity(6, 6)));
  const auto th = CovarianceMatrix::thermal({0.0, 2.0});
  CHECK(th(2, 2) == 2.5);
  CHECK(th(0, 0) == 0.5);

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(CovarianceMatrix{bad}, std::invalid_argument);
  CHECK_THROWS_AS(CovarianceMatrix{Eigen::MatrixXd::Identity(3, 3)},
                  std::invalid_argument);
}

TEST_CASE("partial transpose leaves vacuum unchanged and is involutive") {
  const auto vac = CovarianceMatrix::vacuum(3);
  for (int k = 0; k < 3; ++k) {
    CHECK(partial_transpose(vac, k).matrix().isApprox(vac.matrix()));
  }

  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const CovarianceMatrix v{random_valid_cm(rng, 3)};
    const int k = trial % 3;
    const auto twice = partial_transpose(partial_transpose(v, k), k);
    CHECK((twice.matrix() - v.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(partial_transpose(vac, 3), std::out_of_range);
  CHECK_THROWS_AS(partial_transpose(vac, -1), std::out_of_range);
}

TEST_CASE("partial transpose of the half-period state on the mirror mode") {
  // The mirror block loses its off-diagonal correlations there, so
  // flipping P_b changes nothing beyond the residual of sin(pi) in
  // doubles relative to the (r^2-1)^-2 entries.
  const ScaledParams s(std::numbers::pi, 1.0 + 2.5e-7, 1.0);
  const auto v = full_cm(s);
  const auto pt = partial_transpose(v, 1);
  CHECK((pt.matrix() - v.matrix()).cwiseAbs().maxCoeff() <= 1e-15 * v.max_abs());
}

TEST_CASE("npt eigenvalue: separable product state passes") {
  const auto v = initial_cm(1.5);  // t' = 0 state
  for (int k = 0; k < 3; ++k) {
    CHECK(npt_min_eigenvalue(v, k) >= -1e-15);
  }
}

TEST_CASE("npt eigenvalue: embedded two-mode squeezed state is NPT") {
  for (double sq : {0.3, 1.0, 2.0}) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    m.topLeftCorner(4, 4) = tms_cm(sq);
    m(4, 4) = m(5, 5) = 0.5;
    const CovarianceMatrix v{m};

    const double eta0 = npt_min_eigenvalue(v, 0);
    CHECK(eta0 < 0.0);
    // dual eigensolver paths
    CHECK(std::abs(eta0 - complex_test_matrix_min_eig(v, 0)) <= 1e-10);
    // the untouched third mode stays marginal
    CHECK(npt_min_eigenvalue(v, 2) >= -1e-12);
  }
}

TEST_CASE("npt eigenvalue agrees with the real 12x12 embedding oracle") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const CovarianceMatrix v{random_valid_cm(rng, 3)};
    const int k = trial % 3;
    const Eigen::MatrixXd w = partial_transpose(v, k).matrix();
    const Eigen::MatrixXd b = symplectic_form(3) / 2.0;
    Eigen::MatrixXd embed(12, 12);
    embed << w, -b, b, w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(embed, Eigen::EigenvaluesOnly);
    REQUIRE(es.info() == Eigen::Success);
    CHECK(std::abs(npt_min_eigenvalue(v, k) - es.eigenvalues()(0)) <= 1e-10);
    // eigenvalues of the embedding come doubled
    CHECK(std::abs(es.eigenvalues()(0) - es.eigenvalues()(1)) <= 1e-9);
  }
}

TEST_CASE("general embedding path matches the X/P-decoupled fast path") {
  // npt_min_eigenvalue takes the compact route for this family; the full
  // Hermitian embedding must give the same spectrum edge.
  for (double tp : {0.7, 1.3, 4.4}) {
    const ScaledParams s(tp, 1.5, 2.0);
    const auto pt = partial_transpose(full_cm(s), 1);
    const double lib = npt_min_eigenvalue(full_cm(s), 1);
    const double general =
        detail::min_eigenvalue_hermitian(pt.matrix(), symplectic_form(3) / 2.0);
    CHECK(std::abs(lib - general) <= 1e-12);
  }
}

TEST_CASE("symplectic eigenvalues of two-mode states") {
  const auto vac = symplectic_eigenvalues_2mode(CovarianceMatrix::vacuum(2));
  CHECK(std::abs(vac.n_plus - 0.5) <= 1e-15);
  CHECK(std::abs(vac.n_minus - 0.5) <= 1e-15);

  // product of thermal(n=1) and vacuum: block determinants give
  // Delta = 9/4 + 1/4, det V = 9/16, hence {3/2, 1/2}
  const auto pair = symplectic_eigenvalues_2mode(CovarianceMatrix::thermal({1.0, 0.0}));
  CHECK(std::abs(pair.n_plus - 1.5) <= 1e-14);
  CHECK(std::abs(pair.n_minus - 0.5) <= 1e-14);

  // Channel state at t' = pi is a product of a large thermal-like Stokes
  // mode and the mirror thermal state; its symplectic spectrum is just
  // the two diagonal variances.
  for (double r : {1.5, 1.0 + 2.5e-7}) {
    for (double nb : {0.0, 3.0}) {
      const ScaledParams s(std::numbers::pi, r, nb);
      const CoefficientSet q = coefficients(s);
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
      m(0, 0) = m(1, 1) = q.a + 0.5;
      m(2, 2) = m(3, 3) = q.b + 0.5;
      const auto p = symplectic_eigenvalues_2mode(CovarianceMatrix{m});
      const double hi = std::max(q.a + 0.5, nb + 0.5);
      const double lo = std::min(q.a + 0.5, nb + 0.5);
      CHECK(std::abs(p.n_plus - hi) <= 1e-12 * hi);
      CHECK(std::abs(p.n_minus - lo) <= 1e-12 * std::max(1.0, lo));
    }
  }

  CHECK_THROWS_AS(symplectic_eigenvalues_2mode(CovarianceMatrix::vacuum(1)),
                  std::invalid_argument);
  Eigen::MatrixXd garbage = Eigen::MatrixXd::Identity(4, 4);
  garbage(0, 2) = garbage(2, 0) = 40.0;  // wildly unphysical correlations
  CHECK_THROWS_AS(symplectic_eigenvalues_2mode(CovarianceMatrix{garbage}),
                  std::runtime_error);
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(CovarianceMatrix::vacuum(2)) == 0.0);

  // thermal(n) entropy is (n+1)log2(n+1) - n log2 n; n = 1 gives 2 bits
  const double expected = 2.0 * std::log2(2.0) - 1.0 * std::log2(1.0);
  CHECK(std::abs(von_neumann_entropy(CovarianceMatrix::thermal({1.0, 0.0})) -
                 expected) <= 1e-12);

  // pure two-mode squeezed states carry no entropy; the double-rounded
  // cosh/sinh entries leave a sqrt(eps)-level residual in the degenerate
  // symplectic spectrum
  for (double sq : {0.5, 1.5}) {
    CHECK(std::abs(von_neumann_entropy(CovarianceMatrix{tms_cm(sq)})) <= 1e-5);
  }
}

TEST_CASE("entropy nonnegative, n_minus >= 1/2 on random valid CMs") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const CovarianceMatrix v{random_valid_cm(rng, 2)};
    const auto p = symplectic_eigenvalues_2mode(v);
    CHECK(p.n_minus >= 0.5 - 1e-10);
    CHECK(p.n_plus >= p.n_minus);
    CHECK(von_neumann_entropy(p) >= 0.0);
  }
}

TEST_CASE("entropy is zero only at the pure point") {
  const auto p = symplectic_eigenvalues_2mode(CovarianceMatrix::thermal({0.3, 0.0}));
  CHECK(von_neumann_entropy(p) > 0.0);
}

TEST_CASE("cm validity") {
  CHECK(is_valid_cm(CovarianceMatrix::vacuum(1)));
  CHECK(is_valid_cm(CovarianceMatrix::vacuum(3)));
  CHECK_FALSE(is_valid_cm(CovarianceMatrix{0.1 * Eigen::MatrixXd::Identity(2, 2)}));

  for (double r : {1.0 + 2.5e-7, 1.1, 1.5, 3.0}) {
    for (double tp : {0.0, 0.9, 3.0, 5.5}) {
      for (double nb : {0.0, 1.0, 1000.0}) {
        CHECK(is_valid_cm(full_cm(ScaledParams(tp, r, nb))));
      }
    }
  }
}
