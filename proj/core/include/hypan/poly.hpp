#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hypan/errors.hpp"

namespace hypan {

using cplx = std::complex<double>;

/// Dense-exponent multivariate polynomial with complex coefficients.
///
/// Monomials are exponent vectors of fixed length nvars(); coefficient
/// arithmetic is plain double-precision complex. Zero coefficients are
/// pruned on construction of results.
class Polynomial {
 public:
  using Monomial = std::vector<int>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, cplx c);
  static Polynomial variable(int nvars, int index);

  int nvars() const { return nvars_; }
  bool is_zero(double tol = 0.0) const;
  int degree() const;  // total degree; -1 for the zero polynomial
  bool is_homogeneous(double tol = 0.0) const;

  void add_term(const Monomial& m, cplx c);
  cplx coeff(const Monomial& m) const;
  const std::map<Monomial, cplx>& terms() const { return terms_; }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(cplx c) const;
  Polynomial operator-() const;
  Polynomial pow(int k) const;

  Polynomial derivative(int var) const;

  cplx eval(std::span<const double> point) const;
  cplx eval(std::span<const cplx> point) const;
  cplx eval(const Eigen::VectorXd& point) const;

  /// Coefficients of s -> eval(point + s * dir), lowest degree first.
  std::vector<cplx> restrict_line(const Eigen::VectorXd& point,
                                  const Eigen::VectorXd& dir) const;

  /// Drop terms with |coeff| <= tol.
  Polynomial pruned(double tol) const;

  /// Largest coefficient magnitude.
  double max_coeff() const;

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  int nvars_;
  std::map<Monomial, cplx> terms_;
};

inline Polynomial operator*(cplx c, const Polynomial& p) { return p * c; }

/// Matrix with polynomial entries; dense row-major storage.
class PolyMatrix {
 public:
  PolyMatrix() : rows_(0), cols_(0), nvars_(0) {}
  PolyMatrix(int rows, int cols, int nvars);

  static PolyMatrix identity(int n, int nvars);
  static PolyMatrix from_constant(const Eigen::MatrixXcd& m, int nvars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }

  Polynomial& operator()(int i, int j);
  const Polynomial& operator()(int i, int j) const;

  PolyMatrix operator+(const PolyMatrix& o) const;
  PolyMatrix operator-(const PolyMatrix& o) const;
  PolyMatrix operator*(const PolyMatrix& o) const;
  PolyMatrix operator*(const Polynomial& p) const;
  PolyMatrix scaled(cplx c) const;

  PolyMatrix derivative(int var) const;

  /// Determinant by cofactor expansion (square matrices, size <= 8).
  Polynomial det() const;

  /// Adjugate (transposed cofactor matrix): A * adj(A) = det(A) * I.
  PolyMatrix adjugate() const;

  Eigen::MatrixXcd eval(const Eigen::VectorXd& point) const;

 private:
  PolyMatrix minor_matrix(int drop_row, int drop_col) const;
  int rows_, cols_, nvars_;
  std::vector<Polynomial> a_;
};

/// Roots of a dense univariate polynomial (coefficients lowest first) via
/// the companion matrix. Leading near-zero coefficients are trimmed
/// relative to the largest coefficient magnitude.
std::vector<cplx> univariate_roots(const std::vector<cplx>& coeffs, double trim_rel = 1e-12);

/// Determinant of a numeric matrix: exact cofactor expansion for n <= 8,
/// LU with partial pivoting beyond that.
cplx dense_det(const Eigen::MatrixXcd& m);

/// Adjugate of a numeric matrix by cofactor minors (n <= 8).
Eigen::MatrixXcd dense_adjugate(const Eigen::MatrixXcd& m);

}  // namespace hypan
