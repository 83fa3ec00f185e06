#include "hypan/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hypan {

namespace {
constexpr double kPruneTol = 0.0;

void check_same(int a, int b, const char* what) {
  if (a != b) throw config_error(std::string("Polynomial: mismatched ") + what);
}
}  // namespace

Polynomial Polynomial::constant(int nvars, cplx c) {
  Polynomial p(nvars);
  if (c != cplx(0.0)) p.terms_[Monomial(nvars, 0)] = c;
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw config_error("Polynomial::variable: index out of range");
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[index] = 1;
  p.terms_[m] = 1.0;
  return p;
}

bool Polynomial::is_zero(double tol) const {
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

int Polynomial::degree() const {
  int deg = -1;
  for (const auto& [m, c] : terms_) {
    if (c == cplx(0.0)) continue;
    deg = std::max(deg, std::accumulate(m.begin(), m.end(), 0));
  }
  return deg;
}

bool Polynomial::is_homogeneous(double tol) const {
  int deg = -1;
  for (const auto& [m, c] : terms_) {
    if (std::abs(c) <= tol) continue;
    int d = std::accumulate(m.begin(), m.end(), 0);
    if (deg < 0) deg = d;
    else if (d != deg) return false;
  }
  return true;
}

void Polynomial::add_term(const Monomial& m, cplx c) {
  if (static_cast<int>(m.size()) != nvars_)
    throw config_error("Polynomial::add_term: monomial size mismatch");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (c != cplx(0.0)) terms_[m] = c;
  } else {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  check_same(nvars_, o.nvars_, "variable counts in +");
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  check_same(nvars_, o.nvars_, "variable counts in -");
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_same(nvars_, o.nvars_, "variable counts in *");
  Polynomial out(nvars_);
  Monomial m(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      for (int i = 0; i < nvars_; ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(cplx c) const {
  Polynomial out(nvars_);
  if (c == cplx(0.0)) return out;
  for (const auto& [m, v] : terms_) out.terms_[m] = v * c;
  return out;
}

Polynomial Polynomial::operator-() const { return *this * cplx(-1.0); }

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw config_error("Polynomial::pow: negative exponent");
  Polynomial out = constant(nvars_, 1.0);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw config_error("Polynomial::derivative: bad variable");
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial dm = m;
    dm[var] -= 1;
    out.add_term(dm, c * static_cast<double>(m[var]));
  }
  return out;
}

template <typename Scalar>
static cplx eval_impl(const std::map<Polynomial::Monomial, cplx>& terms, int nvars,
                      std::span<const Scalar> point) {
  if (static_cast<int>(point.size()) != nvars)
    throw config_error("Polynomial::eval: point size mismatch");
  cplx sum = 0.0;
  for (const auto& [m, c] : terms) {
    cplx t = c;
    for (int i = 0; i < nvars; ++i) {
      for (int k = 0; k < m[i]; ++k) t *= point[i];
    }
    sum += t;
  }
  return sum;
}

cplx Polynomial::eval(std::span<const double> point) const {
  return eval_impl<double>(terms_, nvars_, point);
}

cplx Polynomial::eval(std::span<const cplx> point) const {
  return eval_impl<cplx>(terms_, nvars_, point);
}

cplx Polynomial::eval(const Eigen::VectorXd& point) const {
  return eval(std::span<const double>(point.data(), static_cast<size_t>(point.size())));
}

std::vector<cplx> Polynomial::restrict_line(const Eigen::VectorXd& point,
                                            const Eigen::VectorXd& dir) const {
  if (point.size() != nvars_ || dir.size() != nvars_)
    throw config_error("Polynomial::restrict_line: size mismatch");
  std::vector<cplx> out(std::max(degree() + 1, 1), cplx(0.0));
  // For each monomial expand prod_i (p_i + s v_i)^{e_i} over s.
  for (const auto& [m, c] : terms_) {
    std::vector<cplx> mono{c};
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < m[i]; ++k) {
        std::vector<cplx> next(mono.size() + 1, cplx(0.0));
        for (size_t j = 0; j < mono.size(); ++j) {
          next[j] += mono[j] * point[i];
          next[j + 1] += mono[j] * dir[i];
        }
        mono = std::move(next);
      }
    }
    if (mono.size() > out.size()) out.resize(mono.size(), cplx(0.0));
    for (size_t j = 0; j < mono.size(); ++j) out[j] += mono[j];
  }
  return out;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) out.terms_[m] = c;
  return out;
}

double Polynomial::max_coeff() const {
  double mx = 0.0;
  for (const auto& [m, c] : terms_) mx = std::max(mx, std::abs(c));
  return mx;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real();
    if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
    os << ")";
    for (int i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      os << "*" << (i < static_cast<int>(names.size()) ? names[i] : "z" + std::to_string(i));
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

PolyMatrix::PolyMatrix(int rows, int cols, int nvars)
    : rows_(rows), cols_(cols), nvars_(nvars), a_(static_cast<size_t>(rows) * cols, Polynomial(nvars)) {}

PolyMatrix PolyMatrix::identity(int n, int nvars) {
  PolyMatrix out(n, n, nvars);
  for (int i = 0; i < n; ++i) out(i, i) = Polynomial::constant(nvars, 1.0);
  return out;
}

PolyMatrix PolyMatrix::from_constant(const Eigen::MatrixXcd& m, int nvars) {
  PolyMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()), nvars);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out(static_cast<int>(i), static_cast<int>(j)) = Polynomial::constant(nvars, m(i, j));
  return out;
}

Polynomial& PolyMatrix::operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
const Polynomial& PolyMatrix::operator()(int i, int j) const {
  return a_[static_cast<size_t>(i) * cols_ + j];
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw config_error("PolyMatrix: shape mismatch in +");
  PolyMatrix out(rows_, cols_, nvars_);
  for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] + o.a_[k];
  return out;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw config_error("PolyMatrix: shape mismatch in -");
  PolyMatrix out(rows_, cols_, nvars_);
  for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] - o.a_[k];
  return out;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
  if (cols_ != o.rows_) throw config_error("PolyMatrix: shape mismatch in *");
  PolyMatrix out(rows_, o.cols_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) {
      Polynomial s(nvars_);
      for (int k = 0; k < cols_; ++k) s = s + (*this)(i, k) * o(k, j);
      out(i, j) = s;
    }
  return out;
}

PolyMatrix PolyMatrix::operator*(const Polynomial& p) const {
  PolyMatrix out(rows_, cols_, nvars_);
  for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] * p;
  return out;
}

PolyMatrix PolyMatrix::scaled(cplx c) const {
  PolyMatrix out(rows_, cols_, nvars_);
  for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] * c;
  return out;
}

PolyMatrix PolyMatrix::derivative(int var) const {
  PolyMatrix out(rows_, cols_, nvars_);
  for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k].derivative(var);
  return out;
}

PolyMatrix PolyMatrix::minor_matrix(int drop_row, int drop_col) const {
  PolyMatrix out(rows_ - 1, cols_ - 1, nvars_);
  int ii = 0;
  for (int i = 0; i < rows_; ++i) {
    if (i == drop_row) continue;
    int jj = 0;
    for (int j = 0; j < cols_; ++j) {
      if (j == drop_col) continue;
      out(ii, jj) = (*this)(i, j);
      ++jj;
    }
    ++ii;
  }
  return out;
}

Polynomial PolyMatrix::det() const {
  if (rows_ != cols_) throw config_error("PolyMatrix::det: not square");
  if (rows_ > 8) throw config_error("PolyMatrix::det: size > 8 unsupported");
  if (rows_ == 0) return Polynomial::constant(nvars_, 1.0);
  if (rows_ == 1) return (*this)(0, 0);
  Polynomial sum(nvars_);
  for (int j = 0; j < cols_; ++j) {
    Polynomial term = (*this)(0, j) * minor_matrix(0, j).det();
    if (j % 2 == 1) term = -term;
    sum = sum + term;
  }
  return sum;
}

PolyMatrix PolyMatrix::adjugate() const {
  if (rows_ != cols_) throw config_error("PolyMatrix::adjugate: not square");
  if (rows_ > 8) throw config_error("PolyMatrix::adjugate: size > 8 unsupported");
  PolyMatrix out(rows_, cols_, nvars_);
  if (rows_ == 1) {
    out(0, 0) = Polynomial::constant(nvars_, 1.0);
    return out;
  }
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      Polynomial cof = minor_matrix(i, j).det();
      if ((i + j) % 2 == 1) cof = -cof;
      out(j, i) = cof;  // transpose of cofactors
    }
  return out;
}

Eigen::MatrixXcd PolyMatrix::eval(const Eigen::VectorXd& point) const {
  Eigen::MatrixXcd out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).eval(point);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<cplx> univariate_roots(const std::vector<cplx>& coeffs, double trim_rel) {
  double mx = 0.0;
  for (const cplx& c : coeffs) mx = std::max(mx, std::abs(c));
  if (mx == 0.0) throw numerical_error("univariate_roots: zero polynomial");
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) <= trim_rel * mx) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw numerical_error("univariate_roots: eigensolver failed");
  std::vector<cplx> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

cplx dense_det(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw config_error("dense_det: not square");
  const int n = static_cast<int>(m.rows());
  if (n <= 8) {
    if (n == 0) return 1.0;
    if (n == 1) return m(0, 0);
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXcd minor(n - 1, n - 1);
      for (int i = 1; i < n; ++i) {
        int jj = 0;
        for (int k = 0; k < n; ++k) {
          if (k == j) continue;
          minor(i - 1, jj++) = m(i, k);
        }
      }
      cplx term = m(0, j) * dense_det(minor);
      sum += (j % 2 == 0) ? term : -term;
    }
    return sum;
  }
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
}

Eigen::MatrixXcd dense_adjugate(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw config_error("dense_adjugate: not square");
  const int n = static_cast<int>(m.rows());
  if (n > 8) throw config_error("dense_adjugate: size > 8 unsupported");
  Eigen::MatrixXcd out(n, n);
  if (n == 1) {
    out(0, 0) = 1.0;
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXcd minor(n - 1, n - 1);
      int ii = 0;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        int jj = 0;
        for (int c = 0; c < n; ++c) {
          if (c == j) continue;
          minor(ii, jj++) = m(r, c);
        }
        ++ii;
      }
      cplx cof = dense_det(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      out(j, i) = cof;
    }
  return out;
}

}  // namespace hypan
