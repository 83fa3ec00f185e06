#include "hypan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hypan/errors.hpp"

namespace hypan {

double sigma_pairing(const Layout& lay, const PhaseVector& X, const PhaseVector& Y) {
  if (X.size() != lay.size() || Y.size() != lay.size())
    throw config_error("sigma_pairing: size mismatch");
  double s = 0.0;
  for (int q = 0; q <= lay.d; ++q)
    s += X[lay.fiber(q)] * Y[lay.base(q)] - X[lay.base(q)] * Y[lay.fiber(q)];
  return s;
}

namespace {

// K(X) with sigma(X, Y) = K(X) . Y.
PhaseVector sigma_dual(const Layout& lay, const PhaseVector& X) {
  PhaseVector K = PhaseVector::Zero(lay.size());
  for (int q = 0; q <= lay.d; ++q) {
    K[lay.base(q)] = X[lay.fiber(q)];
    K[lay.fiber(q)] = -X[lay.base(q)];
  }
  return K;
}

PhaseVector sigma_dual_inverse(const Layout& lay, const PhaseVector& W) {
  PhaseVector X = PhaseVector::Zero(lay.size());
  for (int q = 0; q <= lay.d; ++q) {
    X[lay.fiber(q)] = W[lay.base(q)];
    X[lay.base(q)] = -W[lay.fiber(q)];
  }
  return X;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, double rel_tol = 1e-10) {
  if (A.rows() == 0) return Eigen::MatrixXd::Identity(A.cols(), A.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  double smax = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > rel_tol * std::max(smax, 1e-300)) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

double real_eval(const Polynomial& p, const Eigen::VectorXd& z, const char* what) {
  cplx v = p.eval(z);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v)))
    throw config_error(std::string(what) + ": defining function is not real-valued");
  return v.real();
}

}  // namespace

Eigen::MatrixXd ManifoldChart::gradients(const Eigen::VectorXd& rho) const {
  const int k = codim();
  const int n = layout.size();
  Eigen::MatrixXd G(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = real_eval(defining_functions[static_cast<size_t>(i)].derivative(j), rho,
                          "ManifoldChart::gradients");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  if (k > 0) {
    double smax = svd.singularValues()[0];
    if (smax <= 0.0 || svd.singularValues()[std::min<int>(k, n) - 1] <= 1e-10 * smax)
      throw assumption_error("ManifoldChart: dependent gradients at the query point");
  }
  return G;
}

PhaseVector hamilton_vector(const Layout& lay, const Polynomial& f, const Eigen::VectorXd& rho) {
  PhaseVector H = PhaseVector::Zero(lay.size());
  for (int q = 0; q <= lay.d; ++q) {
    H[lay.base(q)] = -real_eval(f.derivative(lay.fiber(q)), rho, "hamilton_vector");
    H[lay.fiber(q)] = real_eval(f.derivative(lay.base(q)), rho, "hamilton_vector");
  }
  return H;
}

double poisson_bracket(const Layout& lay, const Polynomial& f, const Polynomial& g,
                       const Eigen::VectorXd& rho) {
  double s = 0.0;
  for (int q = 0; q <= lay.d; ++q) {
    s += real_eval(f.derivative(lay.fiber(q)), rho, "poisson_bracket") *
             real_eval(g.derivative(lay.base(q)), rho, "poisson_bracket") -
         real_eval(f.derivative(lay.base(q)), rho, "poisson_bracket") *
             real_eval(g.derivative(lay.fiber(q)), rho, "poisson_bracket");
  }
  return s;
}

TangentSpaceResult tangent_space(const ManifoldChart& chart, const Eigen::VectorXd& rho) {
  Eigen::MatrixXd G = chart.gradients(rho);
  TangentSpaceResult out;
  out.tangent = null_space(G);
  const int k = chart.codim();
  Eigen::MatrixXd H(chart.layout.size(), k);
  for (int i = 0; i < k; ++i)
    H.col(i) = hamilton_vector(chart.layout, chart.defining_functions[static_cast<size_t>(i)], rho);
  // Orthonormalize for reporting; the span is what matters.
  if (k > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(H);
    out.sigma_orthogonal =
        qr.householderQ() * Eigen::MatrixXd::Identity(chart.layout.size(), k);
  } else {
    out.sigma_orthogonal = Eigen::MatrixXd(chart.layout.size(), 0);
  }
  return out;
}

ManifoldClass classify_manifold(const ManifoldChart& chart, const Eigen::VectorXd& rho,
                                const ClassifyOptions& opt) {
  Eigen::MatrixXd G = chart.gradients(rho);
  const int k = chart.codim();

  bool involutive = true;
  for (int i = 0; i < k && involutive; ++i)
    for (int j = i + 1; j < k; ++j) {
      double b = poisson_bracket(chart.layout, chart.defining_functions[static_cast<size_t>(i)],
                                 chart.defining_functions[static_cast<size_t>(j)], rho);
      double scale = std::max(G.row(i).norm() * G.row(j).norm(), 1e-300);
      if (std::abs(b) > opt.bracket_tol * scale) {
        involutive = false;
        break;
      }
    }
  if (involutive) return ManifoldClass::involutive;

  Eigen::MatrixXd T = null_space(G);
  const int m = static_cast<int>(T.cols());
  Eigen::MatrixXd Gram(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) Gram(a, b) = sigma_pairing(chart.layout, T.col(a), T.col(b));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Gram);
  bool nondegenerate = true;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] <= opt.rank_rel_tol) nondegenerate = false;
  return nondegenerate ? ManifoldClass::symplectic : ManifoldClass::neither;
}

// ---------------------------------------------------------------------------

ConeOracle::ConeOracle(Layout lay, Polynomial p, PhaseVector theta)
    : ConeOracle(lay, std::move(p), std::move(theta), Options{}) {}

ConeOracle::ConeOracle(Layout lay, Polynomial p, PhaseVector theta, Options opt)
    : lay_(lay), p_(std::move(p)), theta_(std::move(theta)), opt_(opt) {
  if (p_.nvars() != lay_.size() || theta_.size() != lay_.size())
    throw config_error("ConeOracle: size mismatch");
  if (!p_.is_homogeneous(1e-12 * std::max(p_.max_coeff(), 1e-300)))
    throw config_error("ConeOracle: polynomial is not homogeneous");

  // Lineality: directions v with sum_i v_i dp/dz_i identically zero.
  const int nv = lay_.size();
  std::vector<Polynomial> grads;
  grads.reserve(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) grads.push_back(p_.derivative(i));
  std::map<Polynomial::Monomial, int> mono_index;
  for (const auto& g : grads)
    for (const auto& [m, c] : g.terms())
      if (!mono_index.count(m)) mono_index[m] = static_cast<int>(mono_index.size());
  Eigen::MatrixXd A(2 * static_cast<int>(mono_index.size()), nv);
  A.setZero();
  for (int i = 0; i < nv; ++i)
    for (const auto& [m, c] : grads[static_cast<size_t>(i)].terms()) {
      int row = mono_index[m];
      A(2 * row, i) = c.real();
      A(2 * row + 1, i) = c.imag();
    }
  lineality_ = null_space(A);
  essential_ = null_space(lineality_.transpose());

  verify_hyperbolic();
  build_rays();
}

void ConeOracle::verify_hyperbolic() const {
  if (hyperbolicity_checked_) return;
  double ptheta = std::abs(p_.eval(theta_));
  double pscale = std::max(p_.max_coeff(), 1e-300);
  if (ptheta <= 1e-10 * pscale)
    throw assumption_error("ConeOracle: polynomial vanishes in the time direction");
  std::mt19937_64 rng(opt_.seed ^ 0x5bd1e995u);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < opt_.gamma_check_samples; ++s) {
    Eigen::VectorXd c(essential_.cols());
    for (int i = 0; i < c.size(); ++i) c[i] = gauss(rng);
    PhaseVector X = essential_ * c;
    if (X.norm() < 1e-12) continue;
    X.normalize();
    auto roots = univariate_roots(p_.restrict_line(X, theta_));
    double scale = 1.0;
    for (const cplx& z : roots) scale = std::max(scale, std::abs(z));
    for (const cplx& z : roots)
      if (std::abs(z.imag()) > 1e-6 * scale)
        throw assumption_error("ConeOracle: polynomial is not hyperbolic in the time direction");
  }
  hyperbolicity_checked_ = true;
}

ConeVerdict ConeOracle::hyperbolicity_membership(const PhaseVector& X) const {
  std::vector<cplx> coeffs = p_.restrict_line(X, theta_);
  std::vector<cplx> roots = univariate_roots(coeffs);
  double scale = std::max(1e-300, X.norm());
  for (const cplx& z : roots) scale = std::max(scale, std::abs(z));
  double top = -1e300;
  for (const cplx& z : roots) top = std::max(top, z.real());
  if (roots.empty()) top = -1e300;  // p constant along the line and nonzero at X
  if (top < -opt_.root_tol * scale) return ConeVerdict::member;
  if (top <= opt_.root_tol * scale) return ConeVerdict::boundary;
  return ConeVerdict::non_member;
}

void ConeOracle::build_rays() {
  std::mt19937_64 rng(opt_.seed);
  std::normal_distribution<double> gauss;
  rays_.clear();
  PhaseVector theta_unit = theta_.normalized();
  rays_.push_back(theta_unit);
  const int m = static_cast<int>(essential_.cols());
  for (int s = 0; s < opt_.polar_samples; ++s) {
    Eigen::VectorXd c(m);
    for (int i = 0; i < m; ++i) c[i] = gauss(rng);
    PhaseVector w = essential_ * c;
    if (w.norm() < 1e-12) continue;
    w.normalize();
    // Shift along theta to the cone boundary: the largest root s* of
    // p(w + s theta) puts w + s* theta on the boundary of Gamma.
    std::vector<cplx> roots = univariate_roots(p_.restrict_line(w, theta_));
    if (roots.empty()) continue;
    double top = -1e300;
    for (const cplx& z : roots) top = std::max(top, z.real());
    PhaseVector ray = w + top * theta_;
    if (ray.norm() < 1e-10) continue;
    rays_.push_back(ray.normalized());
  }
}

ConeVerdict ConeOracle::propagation_membership(const PhaseVector& X) const {
  const double xn = std::max(X.norm(), 1e-300);
  // Exact linear stage: sigma(X, .) must vanish on every full line of Gamma.
  for (int j = 0; j < lineality_.cols(); ++j)
    if (std::abs(sigma_pairing(lay_, X, lineality_.col(j))) > opt_.sigma_rel_tol * xn)
      return ConeVerdict::non_member;
  if (rays_.empty()) return ConeVerdict::indeterminate;
  double mx = -1e300;
  for (const PhaseVector& Y : rays_) mx = std::max(mx, sigma_pairing(lay_, X, Y));
  if (mx > opt_.margin * xn) return ConeVerdict::non_member;
  if (mx < -opt_.margin * xn) return ConeVerdict::member;
  return ConeVerdict::boundary;
}

// ---------------------------------------------------------------------------

ConeInclusionReport cone_inclusion_report(const ConeOracle& cone, const ManifoldChart& chart,
                                          const Eigen::VectorXd& rho) {
  const Layout lay = chart.layout;
  const int nv = lay.size();
  TangentSpaceResult ts = tangent_space(chart, rho);
  ConeInclusionReport rep;

  auto is_member = [&](const PhaseVector& X) {
    ConeVerdict v = cone.propagation_membership(X);
    if (v == ConeVerdict::indeterminate) rep.indeterminate = true;
    return v == ConeVerdict::member || v == ConeVerdict::boundary;
  };
  auto in_tangent = [&](const PhaseVector& X) {
    return (X - ts.tangent * (ts.tangent.transpose() * X)).norm() <= 1e-8 * X.norm();
  };
  auto in_sigma_orth = [&](const PhaseVector& X) {
    if (ts.sigma_orthogonal.cols() == 0) return X.norm() == 0.0;
    Eigen::VectorXd resid =
        X - ts.sigma_orthogonal * (ts.sigma_orthogonal.transpose() * X);
    return resid.norm() <= 1e-7 * X.norm();
  };

  // Candidate rays of C: X with sigma(X, .) >= 0 on Gamma comes from the
  // dual description sigma(X, Y) = K(X) . Y; sample dual vectors against
  // the Gamma ray set and map back.
  std::mt19937_64 rng(0x9e3779b9u);
  std::normal_distribution<double> gauss;
  std::vector<PhaseVector> members;
  const auto& rays = cone.gamma_rays();
  const Eigen::MatrixXd& lin = cone.lineality();
  for (int s = 0; s < 4000 && static_cast<int>(members.size()) < 200; ++s) {
    PhaseVector w = PhaseVector::Zero(nv);
    for (int i = 0; i < nv; ++i) w[i] = gauss(rng);
    w -= lin * (lin.transpose() * w);  // dual vectors annihilate the lineality
    if (w.norm() < 1e-12) continue;
    w.normalize();
    double mn = 1e300;
    for (const PhaseVector& Y : rays) mn = std::min(mn, w.dot(Y));
    if (mn < -1e-9) continue;
    PhaseVector X = sigma_dual_inverse(lay, -w);
    if (is_member(X)) members.push_back(X.normalized());
  }

  // Search C intersect T Sigma inside the subspace where the exact linear
  // stage can hold: tangent vectors with sigma(., lineality) = 0.
  std::vector<Eigen::VectorXd> rows;
  Eigen::MatrixXd G = chart.gradients(rho);
  for (int i = 0; i < G.rows(); ++i) rows.push_back(G.row(i).transpose());
  for (int j = 0; j < lin.cols(); ++j) rows.push_back(sigma_dual(lay, lin.col(j)));
  Eigen::MatrixXd C(static_cast<int>(rows.size()), nv);
  for (size_t i = 0; i < rows.size(); ++i) C.row(static_cast<int>(i)) = rows[i].transpose();
  Eigen::MatrixXd V0 = null_space(C);
  for (int j = 0; j < V0.cols() && !rep.c_meets_tangent; ++j) {
    for (double sign : {1.0, -1.0}) {
      PhaseVector X = sign * V0.col(j);
      if (is_member(X)) {
        rep.c_meets_tangent = true;
        rep.witness_in_tangent = X;
        members.push_back(X.normalized());
        break;
      }
    }
  }
  for (int s = 0; s < 200 && !rep.c_meets_tangent && V0.cols() > 0; ++s) {
    Eigen::VectorXd c(V0.cols());
    for (int i = 0; i < c.size(); ++i) c[i] = gauss(rng);
    PhaseVector X = V0 * c;
    if (X.norm() < 1e-12) continue;
    X.normalize();
    if (is_member(X)) {
      rep.c_meets_tangent = true;
      rep.witness_in_tangent = X;
      members.push_back(X);
    }
  }

  rep.c_subset_sigma_orth = !members.empty();
  for (const PhaseVector& X : members) {
    if (!in_sigma_orth(X)) rep.c_subset_sigma_orth = false;
    if (!rep.c_strictly_larger && !in_tangent(X)) {
      rep.c_strictly_larger = true;
      rep.witness_outside_tangent = X;
    }
  }
  if (members.empty()) rep.indeterminate = true;
  return rep;
}

// ---------------------------------------------------------------------------

Trajectory bicharacteristic_flow(const Layout& lay, const Polynomial& h,
                                 const Eigen::VectorXd& rho0, double dt, int steps,
                                 double grad_tol) {
  const int nv = lay.size();
  std::vector<Polynomial> grads;
  grads.reserve(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) grads.push_back(h.derivative(i));

  auto rhs = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nv);
    for (int q = 0; q <= lay.d; ++q) {
      f[lay.base(q)] = real_eval(grads[static_cast<size_t>(lay.fiber(q))], z, "flow");
      f[lay.fiber(q)] = -real_eval(grads[static_cast<size_t>(lay.base(q))], z, "flow");
    }
    return f;
  };
  auto grad_norm = [&](const Eigen::VectorXd& z) {
    double s = 0;
    for (int i = 0; i < nv; ++i) {
      double g = real_eval(grads[static_cast<size_t>(i)], z, "flow");
      s += g * g;
    }
    return std::sqrt(s);
  };

  Trajectory traj;
  Eigen::VectorXd z = rho0;
  traj.points.push_back(z);
  traj.h_values.push_back(h.eval(z).real());
  for (int s = 0; s < steps; ++s) {
    if (grad_norm(z) < grad_tol) {
      traj.hit_multiple_characteristic = true;
      break;
    }
    Eigen::VectorXd k1 = rhs(z);
    Eigen::VectorXd k2 = rhs(z + 0.5 * dt * k1);
    Eigen::VectorXd k3 = rhs(z + 0.5 * dt * k2);
    Eigen::VectorXd k4 = rhs(z + dt * k3);
    z = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.points.push_back(z);
    traj.h_values.push_back(h.eval(z).real());
  }
  return traj;
}

ScaledLimitResult scaled_limit_in_cone(const Layout& lay, const Polynomial& h,
                                       const ConeOracle& cone,
                                       const std::vector<Eigen::VectorXd>& approach_sequence,
                                       double dir_tol) {
  const int nv = lay.size();
  std::vector<Polynomial> grads;
  for (int i = 0; i < nv; ++i) grads.push_back(h.derivative(i));

  ScaledLimitResult res;
  PhaseVector prev = PhaseVector::Zero(nv), last = PhaseVector::Zero(nv);
  int have = 0;
  for (const Eigen::VectorXd& z : approach_sequence) {
    PhaseVector H = PhaseVector::Zero(nv);
    for (int q = 0; q <= lay.d; ++q) {
      H[lay.base(q)] = real_eval(grads[static_cast<size_t>(lay.fiber(q))], z, "scaled_limit");
      H[lay.fiber(q)] = -real_eval(grads[static_cast<size_t>(lay.base(q))], z, "scaled_limit");
    }
    if (H.norm() < 1e-300) continue;
    H.normalize();  // gamma_j chosen as 1 / |H_h(rho_j)|
    if (have > 0) res.converged = (H - last).norm() <= dir_tol;
    prev = last;
    last = H;
    ++have;
  }
  if (have == 0) {
    res.membership = ConeVerdict::indeterminate;
    return res;
  }
  // For geometric approach families the direction error is linear in the
  // approach parameter; one Richardson step removes it.
  res.limit = have >= 2 ? (2.0 * last - prev).normalized() : last;
  res.membership =
      res.converged ? cone.propagation_membership(res.limit) : ConeVerdict::indeterminate;
  return res;
}

}  // namespace hypan
