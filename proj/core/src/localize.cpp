#include "hypan/localize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hypan/errors.hpp"

namespace hypan {

namespace {

// Spectral projectors of a diagonalizable matrix, one per eigenvalue cluster.
std::vector<Eigen::MatrixXcd> spectral_projectors(const Eigen::MatrixXcd& A,
                                                  double cluster_rel_tol = 1e-8) {
  const int n = static_cast<int>(A.rows());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
  if (es.info() != Eigen::Success) throw numerical_error("spectral_projectors: eigensolver failed");
  Eigen::MatrixXcd V = es.eigenvectors();
  Eigen::VectorXcd lam = es.eigenvalues();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
  Eigen::MatrixXcd Vinv = lu.solve(Eigen::MatrixXcd::Identity(n, n));

  const double scale = std::max(A.norm(), 1e-300);
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lam[a].real() < lam[b].real(); });

  std::vector<Eigen::MatrixXcd> projs;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
    while (j < order.size() &&
           std::abs(lam[order[j]] - lam[order[i]]) <= cluster_rel_tol * scale) {
      P += V.col(order[j]) * Vinv.row(order[j]);
      ++j;
    }
    projs.push_back(P);
    i = j;
  }
  return projs;
}

Eigen::MatrixXcd canonical_symmetrizer(const Eigen::MatrixXcd& A) {
  auto projs = spectral_projectors(A);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(A.rows(), A.cols());
  for (const auto& P : projs) S += P.adjoint() * P;
  return S;
}

Eigen::MatrixXcd eval_A(const SystemSymbol& sys, const CloudPoint& p) {
  return sys.coefficient_combination(p.t, p.x, p.xi);
}

}  // namespace

Eigen::MatrixXcd LocalizedSystem::apply(const PhaseVector& delta) const {
  const int r = base.r;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(r, r);
  for (size_t k = 0; k < maps.size(); ++k) out += delta[static_cast<Eigen::Index>(k)] * maps[k];
  return out;
}

CharacteristicData characteristic_data(const SystemSymbol& sys, const CotangentPoint& rho,
                                       const LocalizeOptions& opt) {
  const int n = sys.N();
  Eigen::MatrixXcd L = eval_symbol(sys, rho);
  CharacteristicData cd;
  cd.rho = rho;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smax = svd.singularValues()[0];
  const double scale = std::max(rho.covector_norm(), 1.0);

  if (smax <= opt.kernel_rel_tol * scale) {
    // L(rho) vanishes entirely: the kernel is all of C^N.
    cd.r = n;
    cd.kernel_basis = Eigen::MatrixXcd::Identity(n, n);
    cd.cokernel_projector = Eigen::MatrixXcd::Identity(n, n);
    return cd;
  }

  int r = 0;
  for (int i = 0; i < n; ++i)
    if (svd.singularValues()[i] <= opt.kernel_rel_tol * smax) ++r;
  if (r == 0) throw assumption_error("characteristic_data: point is not characteristic");
  cd.r = r;
  cd.kernel_basis = svd.matrixV().rightCols(r);
  Eigen::MatrixXcd U = svd.matrixU().rightCols(r);  // left null space of L(rho)

  // Semisimplicity of the eigenvalue tau of A(t, x, xi).
  Eigen::VectorXd x(sys.d()), xi(sys.d());
  for (int j = 0; j < sys.d(); ++j) {
    x[j] = rho.x(j);
    xi[j] = rho.xi(j);
  }
  EigenReport rep = eigen_structure(sys, rho.t(), x, xi);
  double best = 1e300;
  size_t best_k = 0;
  for (size_t k = 0; k < rep.eigenvalues.size(); ++k) {
    double dist = std::abs(rep.eigenvalues[k] - rho.tau());
    if (dist < best) {
      best = dist;
      best_k = k;
    }
  }
  if (!rep.eigenvalues.empty() && rep.geom_mult[best_k] < rep.alg_mult[best_k])
    throw assumption_error("characteristic_data: eigenvalue is not semi-simple");

  // Normalize the cokernel projector so projector * kernel_basis = I_r.
  Eigen::MatrixXcd G = U.adjoint() * cd.kernel_basis;  // r x r
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(G);
  if (lu.rank() < r)
    throw assumption_error("characteristic_data: kernel meets range (semisimplicity violated)");
  cd.cokernel_projector = lu.solve(U.adjoint());
  return cd;
}

LocalizedSystem localize(const SystemSymbol& sys, const CotangentPoint& rho,
                         const LocalizeOptions& opt) {
  LocalizedSystem out;
  out.base = characteristic_data(sys, rho, opt);
  const int nv = sys.layout().size();
  PolyMatrix Lsym = sys.symbol_matrix();
  out.maps.reserve(static_cast<size_t>(nv));
  for (int k = 0; k < nv; ++k) {
    Eigen::MatrixXcd dL = Lsym.derivative(k).eval(rho.z);
    out.maps.push_back(out.base.cokernel_projector * dL * out.base.kernel_basis);
  }

  // det of sum_k delta_k M_k, expanded symbolically in the phase directions.
  const int r = out.base.r;
  PolyMatrix P(r, r, nv);
  for (int k = 0; k < nv; ++k) {
    Polynomial var = Polynomial::variable(nv, k);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) P(i, j) = P(i, j) + var * out.maps[static_cast<size_t>(k)](i, j);
  }
  Polynomial det = P.det();
  out.det_poly = det.pruned(1e-12 * std::max(det.max_coeff(), 1e-300));
  return out;
}

StrictHyperbolicityResult transversal_strict_hyperbolicity(
    const LocalizedSystem& sys, const std::vector<PhaseVector>& tangent_basis,
    const StrictHyperbolicityOptions& opt) {
  const int nv = sys.det_poly.nvars();
  const Layout lay = sys.base.rho.layout;
  const double pscale = std::max(sys.det_poly.max_coeff(), 1e-300);

  // The determinant polynomial must not vary along the tangent directions.
  for (const PhaseVector& u : tangent_basis) {
    Polynomial du(nv);
    for (int i = 0; i < nv; ++i)
      du = du + sys.det_poly.derivative(i) * cplx(u[i]);
    if (du.max_coeff() > opt.tangent_dep_tol * pscale * std::max(u.norm(), 1e-300))
      throw assumption_error(
          "transversal_strict_hyperbolicity: det_poly varies along a tangent direction");
  }

  // Orthonormal basis of the Euclidean complement of the tangent space.
  Eigen::MatrixXd T(nv, static_cast<Eigen::Index>(tangent_basis.size()));
  for (size_t k = 0; k < tangent_basis.size(); ++k) T.col(static_cast<Eigen::Index>(k)) = tangent_basis[k];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeFullU);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-12 * svd.singularValues()[0]) ++rank;
  Eigen::MatrixXd W = svd.matrixU().rightCols(nv - rank);  // complement basis

  PhaseVector theta = PhaseVector::Zero(nv);
  theta[lay.tau()] = 1.0;
  PhaseVector theta_c = W * (W.transpose() * theta);
  if (theta_c.norm() < 1e-12)
    throw assumption_error("transversal_strict_hyperbolicity: time direction is tangent to Sigma");
  theta_c.normalize();

  const int r = sys.det_poly.degree();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;

  StrictHyperbolicityResult res;
  for (int sample = 0; sample < opt.samples; ++sample) {
    Eigen::VectorXd c(W.cols());
    for (int i = 0; i < c.size(); ++i) c[i] = gauss(rng);
    PhaseVector v = W * c;
    v -= v.dot(theta_c) * theta_c;
    if (v.norm() < 1e-10) continue;
    v.normalize();
    ++res.samples_checked;

    std::vector<cplx> coeffs = sys.det_poly.restrict_line(v, theta_c);
    std::vector<cplx> roots = univariate_roots(coeffs);
    bool ok = static_cast<int>(roots.size()) == r;
    double scale = 1.0;
    for (const cplx& z : roots) scale = std::max(scale, std::abs(z));
    if (ok) {
      for (const cplx& z : roots)
        if (std::abs(z.imag()) > opt.gap_rel_tol * scale) ok = false;
      for (size_t a = 0; a + 1 < roots.size() && ok; ++a)
        for (size_t b = a + 1; b < roots.size(); ++b)
          if (std::abs(roots[a] - roots[b]) <= opt.gap_rel_tol * scale) {
            ok = false;
            break;
          }
    }
    if (!ok) {
      res.verdict = false;
      res.witness = v;
      return res;
    }
  }
  res.verdict = true;
  return res;
}

DiagonalizabilityReport uniform_diagonalizability_probe(const SystemSymbol& sys,
                                                        const std::vector<CloudPoint>& cloud) {
  DiagonalizabilityReport rep;
  for (size_t idx = 0; idx < cloud.size(); ++idx) {
    const CloudPoint& p = cloud[idx];
    EigenReport er = eigen_structure(sys, p.t, p.x, p.xi);
    if (!er.semisimple || er.hyperbolicity_violation) {
      rep.flagged.push_back(static_cast<int>(idx));
      continue;
    }
    const int n = sys.N();
    Eigen::MatrixXcd V(n, n);
    int col = 0;
    for (const auto& basis : er.kernel_basis) {
      V.middleCols(col, static_cast<int>(basis.cols())) = basis;
      col += static_cast<int>(basis.cols());
    }
    if (col != n) {
      rep.flagged.push_back(static_cast<int>(idx));
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
    double cond = svd.singularValues()[0] / svd.singularValues()[n - 1];
    if (cond > rep.max_condition) {
      rep.max_condition = cond;
      rep.arg_t = p.t;
      rep.arg_x = p.x;
      rep.arg_xi = p.xi;
    }
  }
  return rep;
}

SymmetrizerProbeResult symmetrizer_discontinuity_probe(
    const SystemSymbol& sys, const std::function<CloudPoint(double)>& path1,
    const std::function<CloudPoint(double)>& path2, int levels) {
  auto limit_along = [&](const std::function<CloudPoint(double)>& path, bool& conv) {
    Eigen::MatrixXcd prev_extrap;
    Eigen::MatrixXcd prev;
    conv = false;
    for (int k = 1; k <= levels; ++k) {
      double eps = std::ldexp(1.0, -k);
      Eigen::MatrixXcd S = canonical_symmetrizer(eval_A(sys, path(eps)));
      if (k > 1) {
        Eigen::MatrixXcd extrap = 2.0 * S - prev;  // first-order Richardson
        if (prev_extrap.size() > 0 &&
            (extrap - prev_extrap).norm() <= 1e-8 * std::max(extrap.norm(), 1.0))
          conv = true;
        prev_extrap = extrap;
      }
      prev = S;
    }
    return prev_extrap;
  };
  SymmetrizerProbeResult res;
  bool c1 = false, c2 = false;
  res.limit1 = limit_along(path1, c1);
  res.limit2 = limit_along(path2, c2);
  res.converged = c1 && c2;
  if (!res.converged)
    throw numerical_error("symmetrizer_discontinuity_probe: extrapolation did not settle");
  res.limit_gap = (res.limit1 - res.limit2).norm();
  return res;
}

Eigen::MatrixXcd cofactor_symbol(const SystemSymbol& sys, const CotangentPoint& rho) {
  if (sys.N() > 8) throw config_error("cofactor_symbol: N > 8 unsupported");
  return dense_adjugate(eval_symbol(sys, rho));
}

PolyMatrix cofactor_symbol_poly(const SystemSymbol& sys) {
  if (sys.N() > 8) throw config_error("cofactor_symbol_poly: N > 8 unsupported");
  return sys.symbol_matrix().adjugate();
}

VanishingOrderResult vanishing_order(const std::function<cplx(const Eigen::VectorXd&)>& f,
                                     const Eigen::VectorXd& rho, const Eigen::VectorXd& v,
                                     const VanishingOrderOptions& opt) {
  std::vector<double> logs_s, logs_f;
  for (int k = opt.k_min; k <= opt.k_max; ++k) {
    double s = std::ldexp(1.0, -k);
    double val = std::abs(f(rho + s * v));
    if (val < opt.underflow_guard) continue;
    logs_s.push_back(std::log(s));
    logs_f.push_back(std::log(val));
  }
  VanishingOrderResult res;
  if (logs_s.size() < 3) {
    res.order = VanishingOrderResult::order_infinite;
    res.reliable = true;
    return res;
  }
  const size_t m = logs_s.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += logs_s[i];
    sy += logs_f[i];
    sxx += logs_s[i] * logs_s[i];
    sxy += logs_s[i] * logs_f[i];
  }
  double denom = m * sxx - sx * sx;
  res.slope = (m * sxy - sx * sy) / denom;
  double intercept = (sy - res.slope * sx) / m;
  double ss = 0;
  for (size_t i = 0; i < m; ++i) {
    double e = logs_f[i] - (intercept + res.slope * logs_s[i]);
    ss += e * e;
  }
  res.residual = std::sqrt(ss / m);
  res.order = static_cast<int>(std::lround(res.slope));
  res.reliable = res.residual <= opt.residual_threshold;
  return res;
}

std::vector<PolyMatrix> composition_lower_order_terms(const SystemSymbol& sys,
                                                      const Eigen::MatrixXcd& B, int max_j) {
  if (max_j > 2) throw config_error("composition_lower_order_terms: only j <= 2 implemented");
  const Layout lay = sys.layout();
  const int nv = lay.size();
  PolyMatrix LB = sys.symbol_matrix() + PolyMatrix::from_constant(B, nv);
  PolyMatrix M = cofactor_symbol_poly(sys);

  // Derivative slots: (t, x_1..x_d) paired with (tau, xi_1..xi_d).
  const int m = 1 + lay.d;
  std::vector<int> idx_tx(static_cast<size_t>(m)), idx_dual(static_cast<size_t>(m));
  idx_tx[0] = lay.t();
  idx_dual[0] = lay.tau();
  for (int k = 0; k < lay.d; ++k) {
    idx_tx[static_cast<size_t>(k + 1)] = lay.x(k);
    idx_dual[static_cast<size_t>(k + 1)] = lay.xi(k);
  }

  // All multi-indices over the m slots with total degree j.
  auto multis_for = [&](int j) {
    std::vector<std::vector<int>> out;
    std::vector<int> multi(static_cast<size_t>(m), 0);
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
      if (slot == m) {
        if (remaining == 0) out.push_back(multi);
        return;
      }
      for (int e = 0; e <= remaining; ++e) {
        multi[static_cast<size_t>(slot)] = e;
        rec(slot + 1, remaining - e);
      }
      multi[static_cast<size_t>(slot)] = 0;
    };
    rec(0, j);
    return out;
  };

  std::vector<PolyMatrix> terms;
  for (int j = 0; j <= max_j; ++j) {
    PolyMatrix acc(sys.N(), sys.N(), nv);
    cplx phase = std::pow(cplx(0.0, -1.0), j);
    for (const auto& multi : multis_for(j)) {
      PolyMatrix dL = LB;
      PolyMatrix dM = M;
      for (size_t slot = 0; slot < multi.size(); ++slot) {
        for (int e = 0; e < multi[slot]; ++e) {
          dL = dL.derivative(idx_tx[slot]);
          dM = dM.derivative(idx_dual[slot]);
        }
      }
      acc = acc + (dL * dM).scaled(phase);
    }
    terms.push_back(acc);
  }
  return terms;
}

}  // namespace hypan
