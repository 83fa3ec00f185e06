#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hypan/spectral.hpp"

namespace hypan {

struct ModeState {
  double kappa = 0.0;
  double time = 0.0;
  Eigen::VectorXcd U;  // stacked (u, v, w) grid values
};

struct EnergyReport {
  double kappa = 0.0, mu = 0.0, lambda = 1.0, dt = 0.0;
  int scheme_order = 4;
  std::vector<double> times;
  std::vector<double> norm2;      // ||U||^2
  std::vector<double> suu;        // (S U, U)
  std::vector<double> energy;     // E(t)
  std::vector<double> seminorm1;  // [[U]]_1^2
  bool aborted = false;           // non-finite state; series truncated at last valid step
  bool energy_bound_ok = false;   // (SU,U)(t) <= e^{2t} (SU,U)(0) (1 + tol), |mu| < 1 only
  double worst_bound_ratio = 0.0;
};

/// One classical RK4 step of U' = M U. Throws numerical_error on a
/// non-finite result.
ModeState step_rk4(const Eigen::MatrixXcd& M, const ModeState& state, double dt);

/// Largest stable step for RK4 on the skew-dominated generator, from an
/// infinity-norm bound on the spectral radius.
double cfl_dt(const ModeDiscretization& disc);

/// Gaussian initial data exp(-kappa x^2 / 2) in the first component;
/// overlaps the oscillator ground state (and the unstable mode when there
/// is one).
Eigen::VectorXcd initial_gaussian(const ModeDiscretization& disc);

Eigen::VectorXcd initial_random(const ModeDiscretization& disc, unsigned seed);

/// Homogeneous evolution U' = M U with per-step tracking of ||U||^2,
/// (SU,U), the second-order energy E and the first seminorm. For |mu| < 1
/// the report checks (SU,U)(t) <= e^{2t} (SU,U)(0) (1 + bound_tol).
EnergyReport evolve_energy(const ModeDiscretization& disc, double T, double dt,
                           const Eigen::VectorXcd& U0, double bound_tol = 1e-3);

struct GronwallResult {
  bool passed = false;
  double worst_ratio = 0.0;    // max E(t) / (K (E(0) + (1+t) int_0^t E))
  double amplification = 0.0;  // E(T) / E(0)
};

/// Pointwise check E(t) <= K (E(0) + (1+t) * trapezoid integral of E).
GronwallResult gronwall_check(const EnergyReport& report, double K = 2.0);

/// Log-norm slope over the trailing part of the history; the growth rate
/// measured from the time evolution.
double norm_growth_rate(const EnergyReport& report, double tail_fraction = 0.5);

struct GrowthFit {
  std::vector<double> kappas, rates;
  double p = 0.0;       // exponent in rate ~ c * kappa^p
  double c = 0.0;
  double s_star = 0.0;  // Gevrey threshold 1 / p
  double fit_residual = 0.0;
  bool no_growth = false;   // every rate below threshold
  bool restricted = false;  // some rates dropped from the fit
  int used = 0;
};

/// Least-squares fit log(rate) = log c + p log kappa over the rates above
/// threshold. Requires at least 3 usable points unless nothing grows.
GrowthFit growth_rate_fit(const std::vector<double>& kappas, const std::vector<double>& rates,
                          double threshold = 1e-6);

}  // namespace hypan
