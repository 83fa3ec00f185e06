#include "hypan/spectral.hpp"

#include <cmath>
#include <random>

#include "hypan/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace hypan {

Eigen::MatrixXcd ModeDiscretization::gh() const {
  const double w = 1.0 - mu * mu;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
  G.block(0, n, n, n) = -Xh.transpose().cast<cplx>();
  G.block(0, 2 * n, n, n) = -Yh.adjoint();
  G.block(n, 0, n, n) = Xh.cast<cplx>();
  G.block(2 * n, 0, n, n) = w * Yh;
  return G;
}

Eigen::MatrixXcd ModeDiscretization::generator() const { return -gh(); }

ModeDiscretization mode_operators(double mu, double kappa, int n, double lambda,
                                  double halfwidth) {
  if (n < 16) throw config_error("mode_operators: n must be at least 16");
  if (kappa < 0.0) throw config_error("mode_operators: kappa must be nonnegative");
  if (lambda <= 0.0) throw config_error("mode_operators: lambda must be positive");

  ModeDiscretization d;
  d.n = n;
  d.kappa = kappa;
  d.mu = mu;
  d.lambda = lambda;
  d.scaled = kappa >= 1.0;

  const double hw = 2.0 * halfwidth / static_cast<double>(n - 1);  // working spacing
  const double s = d.scaled ? std::sqrt(kappa) : 1.0;
  d.h = hw / s;
  if (d.h * std::sqrt(std::max(kappa, 1.0)) > 0.5)
    throw resolution_error("mode_operators: grid too coarse for the Gaussian width");

  d.grid.resize(n);
  for (int i = 0; i < n; ++i) d.grid[i] = (-halfwidth + hw * i) / s;

  d.Dh = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    d.Dh(i, i + 1) = 1.0 / (2.0 * d.h);
    d.Dh(i + 1, i) = -1.0 / (2.0 * d.h);
  }
  d.Xd = d.grid.asDiagonal();
  d.Xh = d.Dh + mu * kappa * d.Xd;
  d.Yh = cplx(0.0, 1.0) * kappa * d.Xd.cast<cplx>();
  d.Ch = kappa * kappa * d.Xd * d.Xd;
  d.Ah = d.Xh.transpose() * d.Xh + (1.0 - mu * mu) * d.Ch;
  d.Bh = d.Xh * d.Xh.transpose();
  d.Dmat = d.Xh.cast<cplx>() * d.Yh.adjoint();
  return d;
}

double mu_from_parameter(cplx a, double tol) {
  cplx mu = cplx(0.0, -1.0) * a;
  if (std::abs(mu.imag()) > tol * (1.0 + std::abs(mu)))
    throw config_error("mu_from_parameter: parameter must be purely imaginary");
  return mu.real();
}

OscillatorCheckResult oscillator_spectrum_check(const ModeDiscretization& disc) {
  if (std::abs(disc.mu) >= 1.0)
    throw assumption_error("oscillator_spectrum_check: requires |mu| < 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(disc.Ah, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("oscillator_spectrum_check: eigensolver failed");
  OscillatorCheckResult res;
  res.lowest = es.eigenvalues()[0];
  res.expected = (1.0 - disc.mu) * disc.kappa;
  res.rel_error = res.expected != 0.0 ? std::abs(res.lowest - res.expected) / res.expected
                                      : std::abs(res.lowest);
  return res;
}

CommutatorCheckResult commutator_inequality_check(const ModeDiscretization& disc, int trials,
                                                 unsigned seed) {
  if (disc.kappa <= 0.0)
    throw assumption_error("commutator_inequality_check: requires kappa > 0");
  auto ratio = [&](const Eigen::VectorXcd& u) {
    double num = disc.kappa * u.squaredNorm();
    double den = (disc.Dh * u).squaredNorm() +
                 disc.kappa * disc.kappa * (disc.Xd * u).squaredNorm();
    return den > 0.0 ? num / den : 0.0;
  };

  CommutatorCheckResult res;
  res.trials = trials;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd u(disc.n);
    for (int i = 0; i < disc.n; ++i) u[i] = cplx(gauss(rng), gauss(rng));
    res.max_ratio = std::max(res.max_ratio, ratio(u));
  }
  Eigen::VectorXcd g(disc.n);
  for (int i = 0; i < disc.n; ++i)
    g[i] = std::exp(-0.5 * disc.kappa * disc.grid[i] * disc.grid[i]);
  res.ground_state_ratio = ratio(g);
  return res;
}

Eigen::MatrixXcd symmetrizer_assemble(const ModeDiscretization& disc, double lambda) {
  if (lambda <= 0.0) throw config_error("symmetrizer_assemble: lambda must be positive");
  const int n = disc.n;
  Eigen::MatrixXcd S = lambda * Eigen::MatrixXcd::Identity(3 * n, 3 * n);
  S.block(0, 0, n, n) += disc.Ah.cast<cplx>();
  S.block(n, n, n, n) += disc.Bh.cast<cplx>();
  S.block(n, 2 * n, n, n) = disc.Dmat;
  S.block(2 * n, n, n, n) = disc.Dmat.adjoint();
  S.block(2 * n, 2 * n, n, n) += disc.Ch.cast<cplx>();
  return S;
}

ReSGCheckResult re_sg_identity_check(const ModeDiscretization& disc, double lambda) {
  const int n = disc.n;
  Eigen::MatrixXcd SG = symmetrizer_assemble(disc, lambda) * disc.gh();
  Eigen::MatrixXcd H = 0.5 * (SG + SG.adjoint());

  ReSGCheckResult res;
  Eigen::MatrixXcd offblocks = H;
  offblocks.block(0, 2 * n, n, n).setZero();
  offblocks.block(2 * n, 0, n, n).setZero();
  res.offblock_residual = offblocks.norm();

  const double mul = disc.mu * disc.mu * lambda;
  double yn2 = disc.Yh.squaredNorm();
  if (mul > 0.0 && yn2 > 0.0) {
    cplx proj = (disc.Yh.adjoint() * H.block(2 * n, 0, n, n)).trace() / yn2;
    res.corner_factor = proj.real() / mul;
  }
  Eigen::MatrixXcd model = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
  model.block(2 * n, 0, n, n) = -0.5 * mul * disc.Yh;
  model.block(0, 2 * n, n, n) = -0.5 * mul * disc.Yh.adjoint();
  res.corner_residual = (H - model).norm();
  return res;
}

Eigen::VectorXcd complex_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw config_error("complex_eigenvalues: square matrix required");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Eigen::MatrixXcd a = m;  // zgeev overwrites
  Eigen::VectorXcd w(n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr,
                                  1, nullptr, 1);
  if (info != 0) throw numerical_error("complex_eigenvalues: zgeev failed");
  return w;
}

double spectral_abscissa(const ModeDiscretization& disc) {
  Eigen::VectorXcd ev = complex_eigenvalues(disc.generator());
  double top = -1e300;
  for (int i = 0; i < ev.size(); ++i) top = std::max(top, ev[i].real());
  return top;
}

double guarded_abscissa(double mu, double kappa, int n, double guard_rel) {
  double a1 = spectral_abscissa(mode_operators(mu, kappa, n));
  double a2 = spectral_abscissa(mode_operators(mu, kappa, 2 * n + 1));
  double scale = std::max({std::abs(a1), std::abs(a2),
                           1e-3 * std::sqrt(std::max(kappa, 1.0))});
  if (std::abs(a1 - a2) > guard_rel * scale)
    throw numerical_error("guarded_abscissa: abscissa not stable under grid refinement");
  return a2;
}

}  // namespace hypan
