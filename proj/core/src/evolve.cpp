#include "hypan/evolve.hpp"

#include <cmath>
#include <random>

#include "hypan/errors.hpp"

namespace hypan {

ModeState step_rk4(const Eigen::MatrixXcd& M, const ModeState& state, double dt) {
  const Eigen::VectorXcd& U = state.U;
  Eigen::VectorXcd k1 = M * U;
  Eigen::VectorXcd k2 = M * (U + 0.5 * dt * k1);
  Eigen::VectorXcd k3 = M * (U + 0.5 * dt * k2);
  Eigen::VectorXcd k4 = M * (U + dt * k3);
  ModeState out;
  out.kappa = state.kappa;
  out.time = state.time + dt;
  out.U = U + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.U.allFinite()) throw numerical_error("step_rk4: non-finite state");
  return out;
}

double cfl_dt(const ModeDiscretization& disc) {
  // rho(M)^2 <= ||Ah||_inf plus the order-one real part; 2.5 is inside the
  // RK4 imaginary-axis stability interval (~2.83).
  double rho = std::sqrt(disc.Ah.cwiseAbs().rowwise().sum().maxCoeff()) + 1.0;
  return 2.5 / rho;
}

Eigen::VectorXcd initial_gaussian(const ModeDiscretization& disc) {
  Eigen::VectorXcd U = Eigen::VectorXcd::Zero(3 * disc.n);
  const double k = std::max(disc.kappa, 1.0);
  for (int i = 0; i < disc.n; ++i)
    U[i] = std::exp(-0.5 * k * disc.grid[i] * disc.grid[i]);
  return U;
}

Eigen::VectorXcd initial_random(const ModeDiscretization& disc, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd U(3 * disc.n);
  for (int i = 0; i < U.size(); ++i) U[i] = cplx(gauss(rng), gauss(rng));
  return U / U.norm();
}

EnergyReport evolve_energy(const ModeDiscretization& disc, double T, double dt,
                           const Eigen::VectorXcd& U0, double bound_tol) {
  if (U0.size() != 3 * disc.n) throw config_error("evolve_energy: state size mismatch");
  if (dt <= 0.0 || T <= 0.0) throw config_error("evolve_energy: T and dt must be positive");
  if (dt > cfl_dt(disc))
    throw config_error("evolve_energy: dt exceeds the RK4 stability bound");

  const int n = disc.n;
  const Eigen::MatrixXcd M = disc.generator();
  const Eigen::MatrixXcd S = symmetrizer_assemble(disc, disc.lambda);
  const double l2 = disc.lambda * disc.lambda;

  EnergyReport rep;
  rep.kappa = disc.kappa;
  rep.mu = disc.mu;
  rep.lambda = disc.lambda;
  rep.dt = dt;

  auto record = [&](const ModeState& st) {
    const Eigen::VectorXcd& U = st.U;
    Eigen::VectorXcd u = U.segment(0, n), v = U.segment(n, n), w = U.segment(2 * n, n);
    Eigen::VectorXcd dtu = (M * U).segment(0, n);
    double suu = (U.adjoint() * (S * U))[0].real();
    double au = (u.adjoint() * (disc.Ah.cast<cplx>() * u))[0].real();
    double E = 0.5 * (dtu.squaredNorm() + au +
                      l2 * (u.squaredNorm() + v.squaredNorm() + w.squaredNorm()));
    double semi = U.squaredNorm();
    for (int b = 0; b < 3; ++b) {
      Eigen::VectorXcd blk = U.segment(b * n, n);
      semi += (disc.Dh * blk).squaredNorm();
      semi += disc.kappa * disc.kappa * (disc.Xd * blk).squaredNorm();
    }
    rep.times.push_back(st.time);
    rep.norm2.push_back(U.squaredNorm());
    rep.suu.push_back(suu);
    rep.energy.push_back(E);
    rep.seminorm1.push_back(semi);
  };

  ModeState st{disc.kappa, 0.0, U0};
  record(st);
  const int steps = static_cast<int>(std::ceil(T / dt - 1e-12));
  for (int k = 0; k < steps; ++k) {
    try {
      st = step_rk4(M, st, dt);
    } catch (const numerical_error&) {
      rep.aborted = true;
      break;
    }
    record(st);
  }

  if (std::abs(disc.mu) < 1.0 && rep.suu.front() > 0.0) {
    rep.worst_bound_ratio = 0.0;
    for (size_t k = 0; k < rep.suu.size(); ++k) {
      double bound = std::exp(2.0 * rep.times[k]) * rep.suu.front();
      rep.worst_bound_ratio = std::max(rep.worst_bound_ratio, rep.suu[k] / bound);
    }
    rep.energy_bound_ok = rep.worst_bound_ratio <= 1.0 + bound_tol;
  }
  return rep;
}

GronwallResult gronwall_check(const EnergyReport& report, double K) {
  GronwallResult res;
  const auto& E = report.energy;
  const auto& t = report.times;
  if (E.size() < 2) throw config_error("gronwall_check: series too short");
  double integral = 0.0;
  res.passed = true;
  for (size_t k = 0; k < E.size(); ++k) {
    if (k > 0) integral += 0.5 * (E[k] + E[k - 1]) * (t[k] - t[k - 1]);
    double rhs = K * (E.front() + (1.0 + t[k]) * integral);
    double ratio = rhs > 0.0 ? E[k] / rhs : (E[k] > 0.0 ? 1e300 : 0.0);
    res.worst_ratio = std::max(res.worst_ratio, ratio);
  }
  res.passed = res.worst_ratio <= 1.0;
  res.amplification = E.front() > 0.0 ? E.back() / E.front() : 0.0;
  return res;
}

double norm_growth_rate(const EnergyReport& report, double tail_fraction) {
  const size_t m = report.times.size();
  if (m < 3) throw config_error("norm_growth_rate: series too short");
  size_t start = static_cast<size_t>(static_cast<double>(m) * (1.0 - tail_fraction));
  start = std::min(start, m - 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t k = start; k < m; ++k) {
    double x = report.times[k];
    double y = 0.5 * std::log(std::max(report.norm2[k], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  double denom = cnt * sxx - sx * sx;
  return denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
}

GrowthFit growth_rate_fit(const std::vector<double>& kappas, const std::vector<double>& rates,
                          double threshold) {
  if (kappas.size() != rates.size() || kappas.empty())
    throw config_error("growth_rate_fit: kappa/rate size mismatch");
  GrowthFit fit;
  fit.kappas = kappas;
  fit.rates = rates;
  std::vector<double> lx, ly;
  for (size_t k = 0; k < rates.size(); ++k) {
    if (rates[k] > threshold && kappas[k] > 0.0) {
      lx.push_back(std::log(kappas[k]));
      ly.push_back(std::log(rates[k]));
    }
  }
  fit.used = static_cast<int>(lx.size());
  fit.restricted = fit.used < static_cast<int>(rates.size());
  if (fit.used == 0) {
    fit.no_growth = true;
    return fit;
  }
  if (fit.used < 2) throw config_error("growth_rate_fit: not enough growing modes for a fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < fit.used; ++k) {
    sx += lx[static_cast<size_t>(k)];
    sy += ly[static_cast<size_t>(k)];
    sxx += lx[static_cast<size_t>(k)] * lx[static_cast<size_t>(k)];
    sxy += lx[static_cast<size_t>(k)] * ly[static_cast<size_t>(k)];
  }
  double denom = fit.used * sxx - sx * sx;
  if (denom == 0.0) throw config_error("growth_rate_fit: degenerate kappa list");
  fit.p = (fit.used * sxy - sx * sy) / denom;
  double intercept = (sy - fit.p * sx) / fit.used;
  fit.c = std::exp(intercept);
  double ss = 0;
  for (int k = 0; k < fit.used; ++k) {
    double r = ly[static_cast<size_t>(k)] - (intercept + fit.p * lx[static_cast<size_t>(k)]);
    ss += r * r;
  }
  fit.fit_residual = std::sqrt(ss / fit.used);
  fit.s_star = std::abs(fit.p) > 1e-12 ? 1.0 / fit.p : 0.0;
  return fit;
}

}  // namespace hypan
