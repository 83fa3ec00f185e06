#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "hypan/modela.hpp"
#include "hypan/symbol.hpp"

#include "helpers.hpp"

using namespace hypan;
using testutil::random_vec;

TEST_SUITE_BEGIN("symbol");

namespace {

CotangentPoint random_point(int d, std::mt19937_64& rng) {
  return make_point(d, random_vec(1, rng)[0], random_vec(d, rng), random_vec(1, rng)[0],
                    random_vec(d, rng));
}

}  // namespace

TEST_CASE("family determinant matches the closed form for several parameters") {
  std::mt19937_64 rng(201);
  for (cplx a : {cplx(0, 0), cplx(0, 0.5), cplx(0, 2), cplx(1, 1)}) {
    SystemSymbol sys = build_model_system(a);
    for (int trial = 0; trial < 50; ++trial) {
      CotangentPoint rho = random_point(2, rng);
      double tau = rho.tau(), xi = rho.xi(0), eta = rho.xi(1), x = rho.x(0);
      cplx expected = tau * (tau * tau - xi * xi - x * x * eta * eta);
      cplx got = det_symbol(sys, rho);
      CHECK(std::abs(got - expected) < 1e-10 * (1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("symbol matrix as polynomials agrees with numeric evaluation") {
  std::mt19937_64 rng(202);
  SystemSymbol sys = build_model_system(cplx(0, 2));
  PolyMatrix sm = sys.symbol_matrix();
  for (int trial = 0; trial < 10; ++trial) {
    CotangentPoint rho = random_point(2, rng);
    CHECK((sm.eval(rho.z) - eval_symbol(sys, rho)).norm() < 1e-11);
  }
}

TEST_CASE("coefficient combination sums the matrices with xi weights") {
  SystemSymbol sys = build_model_system(cplx(0, 2));
  Eigen::VectorXd x(2), xi(2);
  x << 0.3, -1.0;
  xi << 2.0, -1.5;
  Eigen::MatrixXcd expected =
      xi[0] * model_matrix_a() + xi[1] * (0.3 * model_matrix_b(cplx(0, 2)));
  CHECK((sys.coefficient_combination(0.1, x, xi) - expected).norm() < 1e-13);
}

TEST_CASE("eigen structure of the constant block is real and semisimple") {
  SystemSymbol sys = build_model_system(cplx(0, 0.5));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2), xi(2);
  xi << 1.0, 0.0;
  // At x1 = 0 only A contributes: eigenvalues -1, 0, 1 all simple.
  EigenReport rep = eigen_structure(sys, 0.0, x, xi);
  REQUIRE(rep.eigenvalues.size() == 3);
  CHECK(rep.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(rep.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-10));
  for (size_t k = 0; k < rep.eigenvalues.size(); ++k) {
    CHECK(rep.alg_mult[k] == 1);
    CHECK(rep.geom_mult[k] == 1);
  }
  CHECK(rep.semisimple);
  CHECK_FALSE(rep.hyperbolicity_violation);
}

TEST_CASE("eigen structure flags a Jordan block") {
  SystemSymbol sys(2, 1, "jordan");
  sys.coeff(0)(0, 1) = Polynomial::constant(sys.layout().size(), 1.0);
  Eigen::VectorXd x(1), xi(1);
  x << 0.0;
  xi << 1.0;
  EigenReport rep = eigen_structure(sys, 0.0, x, xi);
  REQUIRE(rep.eigenvalues.size() == 1);
  CHECK(rep.alg_mult[0] == 2);
  CHECK(rep.geom_mult[0] == 1);
  CHECK_FALSE(rep.semisimple);
}

TEST_CASE("eigen structure flags complex eigenvalues") {
  // A = [[0, 1], [-1, 0]] has eigenvalues +-i.
  SystemSymbol sys(2, 1, "rotation");
  sys.coeff(0)(0, 1) = Polynomial::constant(sys.layout().size(), 1.0);
  sys.coeff(0)(1, 0) = Polynomial::constant(sys.layout().size(), -1.0);
  Eigen::VectorXd x(1), xi(1);
  x << 0.0;
  xi << 1.0;
  EigenReport rep = eigen_structure(sys, 0.0, x, xi);
  CHECK(rep.hyperbolicity_violation);
}

TEST_CASE("kernel bases span eigenspaces") {
  std::mt19937_64 rng(203);
  SystemSymbol sys = build_model_system(cplx(0, 2));
  Eigen::VectorXd x = random_vec(2, rng), xi = random_vec(2, rng);
  EigenReport rep = eigen_structure(sys, 0.3, x, xi);
  Eigen::MatrixXcd A = sys.coefficient_combination(0.3, x, xi);
  for (size_t k = 0; k < rep.eigenvalues.size(); ++k) {
    const Eigen::MatrixXcd& V = rep.kernel_basis[k];
    REQUIRE(V.cols() == rep.geom_mult[k]);
    CHECK((A * V - rep.eigenvalues[k] * V).norm() < 1e-8 * (1.0 + A.norm()));
    CHECK((V.adjoint() * V - Eigen::MatrixXcd::Identity(V.cols(), V.cols())).norm() < 1e-10);
  }
}

TEST_SUITE_END();
