#include "hypan/symbol.hpp"

#include <algorithm>
#include <cmath>

#include "hypan/errors.hpp"

namespace hypan {

SystemSymbol::SystemSymbol(int dimension, int space_dim, std::string name)
    : dimension_(dimension), layout_{space_dim}, name_(std::move(name)) {
  if (dimension < 1 || space_dim < 1) throw config_error("SystemSymbol: bad dimensions");
  coeffs_.assign(static_cast<size_t>(space_dim),
                 PolyMatrix(dimension, dimension, layout_.size()));
}

PolyMatrix& SystemSymbol::coeff(int j) {
  if (j < 0 || j >= d()) throw config_error("SystemSymbol::coeff: index out of range");
  return coeffs_[static_cast<size_t>(j)];
}

const PolyMatrix& SystemSymbol::coeff(int j) const {
  if (j < 0 || j >= d()) throw config_error("SystemSymbol::coeff: index out of range");
  return coeffs_[static_cast<size_t>(j)];
}

Eigen::MatrixXcd SystemSymbol::coefficient_combination(double t, const Eigen::VectorXd& x,
                                                       const Eigen::VectorXd& xi) const {
  if (x.size() != d() || xi.size() != d())
    throw config_error("coefficient_combination: x/xi size mismatch");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(layout_.size());
  z[layout_.t()] = t;
  for (int j = 0; j < d(); ++j) z[layout_.x(j)] = x[j];
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(N(), N());
  for (int j = 0; j < d(); ++j) acc += xi[j] * coeffs_[static_cast<size_t>(j)].eval(z);
  if (!acc.allFinite()) throw numerical_error("coefficient_combination: non-finite coefficients");
  return acc;
}

PolyMatrix SystemSymbol::symbol_matrix() const {
  const int nv = layout_.size();
  Polynomial tau = Polynomial::variable(nv, layout_.tau());
  PolyMatrix out = PolyMatrix::identity(N(), nv) * tau;
  for (int j = 0; j < d(); ++j) {
    Polynomial xij = Polynomial::variable(nv, layout_.xi(j));
    out = out - coeffs_[static_cast<size_t>(j)] * xij;
  }
  return out;
}

Eigen::MatrixXcd eval_symbol(const SystemSymbol& sys, const CotangentPoint& rho) {
  if (rho.layout.d != sys.d()) throw config_error("eval_symbol: space dimension mismatch");
  if (!rho.z.allFinite()) throw config_error("eval_symbol: non-finite point");
  Eigen::VectorXd x(sys.d()), xi(sys.d());
  for (int j = 0; j < sys.d(); ++j) {
    x[j] = rho.x(j);
    xi[j] = rho.xi(j);
  }
  Eigen::MatrixXcd A = sys.coefficient_combination(rho.t(), x, xi);
  return rho.tau() * Eigen::MatrixXcd::Identity(sys.N(), sys.N()) - A;
}

cplx det_symbol(const SystemSymbol& sys, const CotangentPoint& rho) {
  return dense_det(eval_symbol(sys, rho));
}

EigenReport eigen_structure(const SystemSymbol& sys, double t, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& xi, const EigenStructureOptions& opt) {
  Eigen::MatrixXcd A = sys.coefficient_combination(t, x, xi);
  const int n = sys.N();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw numerical_error("eigen_structure: eigensolver failed");

  const double scale = std::max(A.norm(), 1e-300);
  const double ctol = opt.cluster_rel_tol * scale;

  std::vector<cplx> evs(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) evs[static_cast<size_t>(i)] = es.eigenvalues()[i];
  std::sort(evs.begin(), evs.end(),
            [](const cplx& a, const cplx& b) { return a.real() < b.real(); });

  EigenReport rep;
  for (const cplx& ev : evs) {
    if (std::abs(ev.imag()) > opt.real_rel_tol * scale) rep.hyperbolicity_violation = true;
  }

  // Cluster by real part.
  size_t i = 0;
  while (i < evs.size()) {
    size_t j = i + 1;
    double acc = evs[i].real();
    while (j < evs.size() && std::abs(evs[j].real() - acc / static_cast<double>(j - i)) <= ctol) {
      acc += evs[j].real();
      ++j;
    }
    double lambda = acc / static_cast<double>(j - i);
    rep.eigenvalues.push_back(lambda);
    rep.alg_mult.push_back(static_cast<int>(j - i));
    i = j;
  }

  // Geometric multiplicity and eigenspace bases via SVD of A - lambda I.
  rep.semisimple = !rep.hyperbolicity_violation;
  for (size_t k = 0; k < rep.eigenvalues.size(); ++k) {
    Eigen::MatrixXcd shifted =
        A - rep.eigenvalues[k] * Eigen::MatrixXcd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    double smax = svd.singularValues()[0];
    double rtol = opt.rank_rel_tol * std::max(smax, 1e-300);
    int rank = 0;
    for (int s = 0; s < svd.singularValues().size(); ++s)
      if (svd.singularValues()[s] > rtol) ++rank;
    int geom = n - rank;
    rep.geom_mult.push_back(geom);
    rep.kernel_basis.push_back(svd.matrixV().rightCols(std::max(geom, 0)));
    if (geom != rep.alg_mult[k]) rep.semisimple = false;
  }
  return rep;
}

}  // namespace hypan
