#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hypan/phase.hpp"
#include "hypan/poly.hpp"

namespace hypan {

/// First-order system symbol L(t, x, tau, xi) = tau*I - sum_j xi_j A_j(t, x).
///
/// Coefficient matrices are stored as polynomial matrices over the full
/// phase variable set (they may only use the t, x slots), so symbol
/// derivatives in any phase direction are exact.
class SystemSymbol {
 public:
  SystemSymbol(int dimension, int space_dim, std::string name);

  int N() const { return dimension_; }
  int d() const { return layout_.d; }
  const Layout& layout() const { return layout_; }
  const std::string& name() const { return name_; }

  /// Coefficient matrix A_j as a polynomial matrix in (t, x).
  PolyMatrix& coeff(int j);
  const PolyMatrix& coeff(int j) const;

  /// A(t, x, xi) = sum_j xi_j A_j(t, x) evaluated numerically.
  Eigen::MatrixXcd coefficient_combination(double t, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& xi) const;

  /// The full symbol tau*I - sum_j xi_j A_j as a polynomial matrix over
  /// the phase variables.
  PolyMatrix symbol_matrix() const;

 private:
  int dimension_;
  Layout layout_;
  std::string name_;
  std::vector<PolyMatrix> coeffs_;
};

/// Eigenstructure of A(t, x, xi), clustered into eigenvalue groups.
struct EigenReport {
  std::vector<double> eigenvalues;        // one per cluster, ascending
  std::vector<int> alg_mult;
  std::vector<int> geom_mult;
  bool semisimple = false;
  bool hyperbolicity_violation = false;   // non-real eigenvalue beyond tolerance
  std::vector<Eigen::MatrixXcd> kernel_basis;  // orthonormal basis per cluster
};

/// L(rho) = tau*I - sum_j xi_j A_j(t, x) at a phase point.
Eigen::MatrixXcd eval_symbol(const SystemSymbol& sys, const CotangentPoint& rho);

/// det L(rho); cofactor expansion for N <= 8, LU beyond.
cplx det_symbol(const SystemSymbol& sys, const CotangentPoint& rho);

struct EigenStructureOptions {
  double cluster_rel_tol = 1e-8;   // relative to ||A||
  double rank_rel_tol = 1e-10;     // singular values below this * sigma_max count as zero
  double real_rel_tol = 1e-8;      // imaginary part beyond this * ||A|| flags a violation
};

/// Eigenvalues of A(t, x, xi) with algebraic/geometric multiplicities.
EigenReport eigen_structure(const SystemSymbol& sys, double t, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& xi, const EigenStructureOptions& opt = {});

}  // namespace hypan
