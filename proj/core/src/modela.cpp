#include "hypan/modela.hpp"

#include <cmath>

#include "hypan/errors.hpp"

namespace hypan {

Eigen::Matrix3cd model_matrix_a() {
  Eigen::Matrix3cd A = Eigen::Matrix3cd::Zero();
  A(0, 1) = 1.0;
  A(1, 0) = 1.0;
  return A;
}

Eigen::Matrix3cd model_matrix_b(cplx a) {
  Eigen::Matrix3cd B = Eigen::Matrix3cd::Zero();
  B(0, 1) = a;
  B(0, 2) = 1.0;
  B(1, 0) = -a;
  B(2, 0) = 1.0 + a * a;
  return B;
}

SystemSymbol build_model_system(cplx a) {
  SystemSymbol sys(3, 2, "model-family");
  const int nv = sys.layout().size();
  sys.coeff(0) = PolyMatrix::from_constant(model_matrix_a(), nv);
  Polynomial x1 = Polynomial::variable(nv, sys.layout().x(0));
  sys.coeff(1) = PolyMatrix::from_constant(model_matrix_b(a), nv) * x1;
  return sys;
}

cplx beta_root(cplx a, int branch) {
  if (branch != 1 && branch != -1) throw config_error("beta_root: branch must be +1 or -1");
  return std::sqrt(1.0 - static_cast<double>(branch) * cplx(0.0, 1.0) * std::conj(a));
}

bool model_unstable(cplx a, double tol) {
  for (int s : {1, -1}) {
    cplx b2 = 1.0 - static_cast<double>(s) * cplx(0.0, 1.0) * std::conj(a);
    if (std::abs(b2.imag()) > tol || b2.real() < -tol) return true;
  }
  return false;
}

Eigen::Vector3cd exact_adjoint_solution(const ModelParams& par, double t, double x, double y) {
  const double s = static_cast<double>(par.branch);
  const cplx i(0.0, 1.0);
  const cplx beta = beta_root(par.a, par.branch);
  if (std::abs(beta) < 1e-14)
    throw assumption_error("exact_adjoint_solution: degenerate branch (beta = 0)");
  const double eta = par.eta;
  cplx phase = i * beta * eta * t + s * i * y * eta * eta - 0.5 * eta * eta * x * x;
  Eigen::Vector3cd w0(1.0, 0.0, 0.0);
  Eigen::Vector3cd w1(0.0, -i * beta, -s / beta);
  return std::exp(phase) * (w0 + eta * x * w1);
}

ResidualOrderResult adjoint_residual_order(const ModelParams& par,
                                           const std::vector<double>& h_values) {
  ResidualOrderResult res;
  res.h_values = h_values;
  if (res.h_values.empty()) res.h_values = {0.2, 0.1, 0.05, 0.025, 0.0125};

  const Eigen::Matrix3cd A = model_matrix_a();
  const Eigen::Matrix3cd Bstar = model_matrix_b(par.a).adjoint();
  struct Pt {
    double t, x, y;
  };
  const std::vector<Pt> pts = {
      {0.30, 0.40, -0.20}, {0.10, -0.50, 0.70}, {-0.40, 0.20, 0.10}, {0.00, 0.80, -0.60}};

  auto W = [&](double t, double x, double y) { return exact_adjoint_solution(par, t, x, y); };
  // Five-point fourth-order central first derivative.
  auto d4 = [](const Eigen::Vector3cd& m2, const Eigen::Vector3cd& m1, const Eigen::Vector3cd& p1,
               const Eigen::Vector3cd& p2, double h) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  };

  for (double h : res.h_values) {
    double worst = 0.0;
    for (const Pt& p : pts) {
      Eigen::Vector3cd dt = d4(W(p.t - 2 * h, p.x, p.y), W(p.t - h, p.x, p.y),
                               W(p.t + h, p.x, p.y), W(p.t + 2 * h, p.x, p.y), h);
      Eigen::Vector3cd dx = d4(W(p.t, p.x - 2 * h, p.y), W(p.t, p.x - h, p.y),
                               W(p.t, p.x + h, p.y), W(p.t, p.x + 2 * h, p.y), h);
      Eigen::Vector3cd dy = d4(W(p.t, p.x, p.y - 2 * h), W(p.t, p.x, p.y - h),
                               W(p.t, p.x, p.y + h), W(p.t, p.x, p.y + 2 * h), h);
      Eigen::Vector3cd r = dt + A * dx + p.x * (Bstar * dy);
      double scale = std::max(W(p.t, p.x, p.y).norm(), 1e-300);
      worst = std::max(worst, r.norm() / scale);
    }
    res.residuals.push_back(worst);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(res.h_values.size());
  for (int k = 0; k < n; ++k) {
    double lx = std::log(res.h_values[static_cast<size_t>(k)]);
    double ly = std::log(std::max(res.residuals[static_cast<size_t>(k)], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = n * sxx - sx * sx;
  res.order = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  return res;
}

}  // namespace hypan
