#include <doctest.h>

#include <Eigen/Dense>

#include "hypan/modela.hpp"

using namespace hypan;

TEST_SUITE_BEGIN("modela");

TEST_CASE("coefficient matrices have the documented entries") {
  Eigen::Matrix3cd A = model_matrix_a();
  Eigen::Matrix3cd expectA;
  expectA << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  CHECK((A - expectA).norm() < 1e-15);

  cplx a(0.3, -0.7);
  Eigen::Matrix3cd B = model_matrix_b(a);
  Eigen::Matrix3cd expectB;
  expectB << 0.0, a, 1.0, -a, 0.0, 0.0, 1.0 + a * a, 0.0, 0.0;
  CHECK((B - expectB).norm() < 1e-14);
}

TEST_CASE("beta roots for the reference parameters") {
  // beta^2 = 1 - s i conj(a).
  CHECK(std::abs(beta_root(cplx(0, 2), +1) * beta_root(cplx(0, 2), +1) + 1.0) < 1e-14);
  CHECK(std::abs(beta_root(cplx(0, 2), -1) - std::sqrt(3.0)) < 1e-14);   // beta^2 = 3
  CHECK(std::abs(beta_root(cplx(0, 0.5), +1) - std::sqrt(0.5)) < 1e-14);
  CHECK(std::abs(beta_root(cplx(0, 0.5), -1) - std::sqrt(1.5)) < 1e-14);
  CHECK(std::abs(beta_root(cplx(0, 0), 1) - 1.0) < 1e-15);
}

TEST_CASE("instability classification of the parameter") {
  CHECK_FALSE(model_unstable(cplx(0, 0)));
  CHECK_FALSE(model_unstable(cplx(0, 0.5)));
  CHECK_FALSE(model_unstable(cplx(0, 0.99)));
  CHECK(model_unstable(cplx(0, 2)));
  CHECK(model_unstable(cplx(1, 1)));
}

TEST_CASE("closed-form solution normalization at the origin") {
  ModelParams par{cplx(0, 2), 1.0, +1};
  Eigen::Vector3cd W = exact_adjoint_solution(par, 0.0, 0.0, 0.0);
  CHECK(std::abs(W[0] - 1.0) < 1e-15);
  CHECK(std::abs(W[1]) < 1e-15);
  CHECK(std::abs(W[2]) < 1e-15);
}

TEST_CASE("closed-form solution solves the adjoint equation to stencil order") {
  // Fourth-order differences on an exact solution leave an O(h^4) residual;
  // the fitted slope doubles as a check on the operator convention.
  for (int branch : {+1, -1}) {
    ModelParams par{cplx(0, 2), 1.0, branch};
    ResidualOrderResult res = adjoint_residual_order(par);
    REQUIRE(res.h_values.size() == res.residuals.size());
    CHECK(res.order > 3.8);
    CHECK(res.order < 4.4);
    CHECK(res.residuals.back() < res.residuals.front());
  }
  ModelParams stable{cplx(0, 0.5), 2.0, +1};
  CHECK(adjoint_residual_order(stable).order > 3.8);
}

TEST_CASE("solution grows in time exactly when beta is off the real axis") {
  double t = 3.0;
  // a = 2i: branch -1 has beta = sqrt(3) real, pure oscillation; branch +1
  // has beta^2 = -1, so |exp(i beta eta t)| = exp(-Im(beta) t) is a real
  // exponential.
  ModelParams plus{cplx(0, 2), 1.0, +1};
  ModelParams minus{cplx(0, 2), 1.0, -1};
  double mag_plus = std::abs(exact_adjoint_solution(plus, t, 0.0, 0.0)[0]);
  double mag_minus = std::abs(exact_adjoint_solution(minus, t, 0.0, 0.0)[0]);
  CHECK(mag_minus == doctest::Approx(1.0).epsilon(1e-12));
  double im = beta_root(cplx(0, 2), +1).imag();
  CHECK(std::abs(im) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mag_plus == doctest::Approx(std::exp(-im * t)).epsilon(1e-10));
}

TEST_SUITE_END();
