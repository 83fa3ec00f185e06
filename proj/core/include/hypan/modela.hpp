#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hypan/symbol.hpp"

namespace hypan {

/// The 3x3 two-space-dimension family with coefficient matrices
///   A_1 = A (constant), A_2 = x1 * B(a),
/// where a is a complex parameter.
Eigen::Matrix3cd model_matrix_a();
Eigen::Matrix3cd model_matrix_b(cplx a);

SystemSymbol build_model_system(cplx a);

/// beta with beta^2 = 1 - branch * i * conj(a); principal square root.
cplx beta_root(cplx a, int branch);

/// True when some branch has beta^2 off the nonnegative real axis, so the
/// oscillatory factor exp(i beta eta t) grows for one sign of beta.
bool model_unstable(cplx a, double tol = 1e-12);

struct ModelParams {
  cplx a;
  double eta = 1.0;
  int branch = 1;  // +1 or -1
};

/// Closed-form solution of the adjoint equation
///   d_t W + A d_x W + x B(a)^* d_y W = 0,
/// W = exp(i beta eta t + s i y eta^2 - eta^2 x^2 / 2) (W0 + eta x W1)
/// with s the branch sign, W0 = (1,0,0), W1 = (0, -i beta, -s / beta).
Eigen::Vector3cd exact_adjoint_solution(const ModelParams& par, double t, double x, double y);

struct ResidualOrderResult {
  std::vector<double> h_values;
  std::vector<double> residuals;  // max norm over the sample points
  double order = 0.0;             // least-squares slope in log-log
};

/// Residual of the adjoint equation on the closed-form solution with
/// fourth-order central differences; the measured order doubles as a check
/// on both the solution and the operator convention.
ResidualOrderResult adjoint_residual_order(const ModelParams& par,
                                           const std::vector<double>& h_values = {});

}  // namespace hypan
