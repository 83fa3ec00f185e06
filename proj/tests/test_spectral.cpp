#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "hypan/modela.hpp"
#include "hypan/spectral.hpp"

#include "helpers.hpp"

using namespace hypan;

TEST_SUITE_BEGIN("spectral");

namespace {

Eigen::VectorXcd random_state(int size, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd U(size);
  for (int i = 0; i < size; ++i) U[i] = cplx(gauss(rng), gauss(rng));
  return U;
}

}  // namespace

TEST_CASE("grid and first-order blocks") {
  ModeDiscretization disc = mode_operators(0.5, 4.0, 65);
  CHECK(disc.scaled);
  CHECK(disc.n == 65);
  // Scaled grid: sqrt(kappa) x uniform on [-8, 8].
  CHECK(disc.grid[0] == doctest::Approx(-8.0 / 2.0));
  CHECK(disc.grid[64] == doctest::Approx(8.0 / 2.0));
  CHECK(disc.grid[32] == doctest::Approx(0.0));
  CHECK(disc.h == doctest::Approx(16.0 / 64.0 / 2.0));
  // Dh is exactly skew-symmetric, Xd diagonal with the grid.
  CHECK((disc.Dh + disc.Dh.transpose()).norm() == 0.0);
  CHECK((disc.Xd - Eigen::MatrixXd(disc.grid.asDiagonal())).norm() == 0.0);
  CHECK((disc.Xh - (disc.Dh + 0.5 * 4.0 * disc.Xd)).norm() == 0.0);
  CHECK((disc.Yh - cplx(0, 4.0) * disc.Xd.cast<cplx>()).norm() == 0.0);

  ModeDiscretization coarse = mode_operators(0.0, 0.25, 33);
  CHECK_FALSE(coarse.scaled);
  CHECK(coarse.grid[0] == doctest::Approx(-8.0));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(mode_operators(0.5, 4.0, 8), config_error);
  CHECK_THROWS_AS(mode_operators(0.5, -1.0, 65), config_error);
  CHECK_THROWS_AS(mode_operators(0.5, 4.0, 65, 0.0), config_error);
  // Scaled spacing 16/(n-1) stays above 0.5 for n < 33 at any kappa >= 1.
  CHECK_THROWS_AS(mode_operators(0.5, 4.0, 17), resolution_error);
  CHECK_NOTHROW(mode_operators(0.5, 4.0, 40));
}

TEST_CASE("mu from the family parameter") {
  CHECK(mu_from_parameter(cplx(0, 0.5)) == doctest::Approx(0.5));
  CHECK(mu_from_parameter(cplx(0, 2)) == doctest::Approx(2.0));
  CHECK(mu_from_parameter(cplx(0, 0)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mu_from_parameter(cplx(1, 1)), config_error);
}

TEST_CASE("generator equals the per-mode image of the coefficient matrices") {
  // Block (i, j) of the generator must be -(A_ij Dh + i kappa B(i mu)_ij Xd):
  // the tensor form of d_t + A d_x + x B d_y at y-frequency kappa.
  const double mu = 0.5, kappa = 4.0;
  ModeDiscretization disc = mode_operators(mu, kappa, 33);
  const int n = disc.n;
  Eigen::Matrix3cd A = model_matrix_a();
  Eigen::Matrix3cd B = model_matrix_b(cplx(0, mu));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      expected.block(i * n, j * n, n, n) =
          -(A(i, j) * disc.Dh.cast<cplx>() + cplx(0, kappa) * B(i, j) * disc.Xd.cast<cplx>());
  CHECK((disc.generator() - expected).norm() < 1e-13 * expected.norm());
  CHECK((disc.generator() + disc.gh()).norm() == 0.0);
}

TEST_CASE("second-order block identities are exact matrix algebra") {
  for (double mu : {0.0, 0.5, 2.0}) {
    ModeDiscretization disc = mode_operators(mu, 3.0, 49);
    double scale = disc.Ah.norm() + disc.Bh.norm() + 1.0;
    Eigen::MatrixXcd Xh = disc.Xh.cast<cplx>();
    double w = 1.0 - mu * mu;
    CHECK((disc.Bh.cast<cplx>() * Xh + w * disc.Dmat * disc.Yh - Xh * disc.Ah.cast<cplx>())
              .norm() < 1e-12 * scale);
    CHECK((disc.Dmat.adjoint() * Xh + w * disc.Ch.cast<cplx>() * disc.Yh -
           disc.Yh * disc.Ah.cast<cplx>())
              .norm() < 1e-12 * scale);
    CHECK((disc.Ah - (disc.Xh.transpose() * disc.Xh + w * 9.0 * disc.Xd * disc.Xd)).norm() <
          1e-12 * scale);
  }
}

TEST_CASE("symmetrizer is Hermitian and bounded below by lambda") {
  ModeDiscretization disc = mode_operators(0.5, 4.0, 49, 2.0);
  Eigen::MatrixXcd S = symmetrizer_assemble(disc, 2.0);
  CHECK((S - S.adjoint()).norm() == 0.0);
  for (unsigned seed : {1u, 2u, 3u}) {
    Eigen::VectorXcd U = random_state(3 * disc.n, seed);
    double suu = (U.adjoint() * (S * U))[0].real();
    CHECK(suu >= 2.0 * U.squaredNorm() * (1.0 - 1e-12));
  }
  CHECK_THROWS_AS(symmetrizer_assemble(disc, 0.0), config_error);
}

TEST_CASE("Hermitian part of S Gh reduces to the corner blocks") {
  for (double mu : {0.5, 2.0}) {
    for (double lambda : {1.0, 3.0}) {
      ModeDiscretization disc = mode_operators(mu, 2.0, 49, lambda);
      ReSGCheckResult res = re_sg_identity_check(disc, lambda);
      double scale = disc.Ah.norm() + 1.0;
      CHECK(res.offblock_residual < 1e-12 * scale);
      CHECK(res.corner_residual < 1e-12 * scale);
      // Frozen regression value: the corner blocks are -1/2 mu^2 lambda Yh.
      CHECK(res.corner_factor == doctest::Approx(-0.5).epsilon(1e-10));
    }
  }
  // mu = 0: Re(S Gh) vanishes identically.
  ModeDiscretization disc0 = mode_operators(0.0, 2.0, 49);
  ReSGCheckResult res0 = re_sg_identity_check(disc0, 1.0);
  CHECK(res0.corner_residual < 1e-12 * (disc0.Ah.norm() + 1.0));
  CHECK(res0.offblock_residual < 1e-12 * (disc0.Ah.norm() + 1.0));
}

TEST_CASE("oscillator ground level (1 - mu) kappa with second-order accuracy") {
  struct Case {
    double mu, kappa;
  };
  for (Case c : {Case{0.5, 1.0}, Case{0.0, 4.0}, Case{0.9, 2.0}}) {
    ModeDiscretization fine = mode_operators(c.mu, c.kappa, 513);
    OscillatorCheckResult res = oscillator_spectrum_check(fine);
    CHECK(res.expected == doctest::Approx((1.0 - c.mu) * c.kappa));
    CHECK(res.rel_error < 1e-3);
  }
  // Error drops by ~4x when the grid is doubled.
  double e65 = oscillator_spectrum_check(mode_operators(0.5, 1.0, 65)).rel_error;
  double e129 = oscillator_spectrum_check(mode_operators(0.5, 1.0, 129)).rel_error;
  CHECK(e65 / e129 == doctest::Approx(4.0).epsilon(0.15));
  CHECK_THROWS_AS(oscillator_spectrum_check(mode_operators(2.0, 1.0, 65)),
                  assumption_error);
}

TEST_CASE("uncertainty-type lower bound holds on the grid") {
  for (double kappa : {1.0, 4.0, 16.0}) {
    ModeDiscretization disc = mode_operators(0.0, kappa, 129);
    CommutatorCheckResult res = commutator_inequality_check(disc);
    CHECK(res.trials > 0);
    CHECK(res.max_ratio <= 1.0 + 1e-2);
    // The Gaussian ground state saturates the bound.
    CHECK(res.ground_state_ratio == doctest::Approx(1.0).epsilon(2e-2));
  }
}

TEST_CASE("dense eigenvalue solver on a known spectrum") {
  std::mt19937_64 rng(501);
  Eigen::MatrixXcd T = testutil::random_cmat(5, rng) + 4.0 * Eigen::MatrixXcd::Identity(5, 5);
  Eigen::VectorXcd diag(5);
  diag << cplx(1, 0), cplx(-2, 0.5), cplx(0, 3), cplx(4, -1), cplx(0.1, 0.1);
  Eigen::MatrixXcd Mmat = T * diag.asDiagonal() * T.inverse();
  Eigen::VectorXcd eig = complex_eigenvalues(Mmat);
  REQUIRE(eig.size() == 5);
  for (int i = 0; i < 5; ++i) {
    double best = 1e9;
    for (int j = 0; j < 5; ++j) best = std::min(best, std::abs(eig[j] - diag[i]));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("abscissa: skew for kappa 0, damped for small mu, sqrt scaling for mu 2") {
  ModeDiscretization free = mode_operators(0.0, 0.0, 65);
  CHECK(std::abs(spectral_abscissa(free)) < 1e-10);

  ModeDiscretization stable = mode_operators(0.5, 4.0, 65);
  CHECK(std::abs(spectral_abscissa(stable)) < 1e-6);

  double g16 = guarded_abscissa(2.0, 16.0, 129);
  CHECK(g16 / 4.0 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(guarded_abscissa(0.5, 16.0, 65)) < 1e-6);
}

TEST_CASE("generator scales exactly like sqrt(kappa) on the scaled grid") {
  ModeDiscretization m1 = mode_operators(2.0, 1.0, 65);
  ModeDiscretization m4 = mode_operators(2.0, 4.0, 65);
  CHECK((m4.generator() - 2.0 * m1.generator()).norm() < 1e-8 * m4.generator().norm());
}

TEST_SUITE_END();
