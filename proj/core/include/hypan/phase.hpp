#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "hypan/errors.hpp"

namespace hypan {

using cplx = std::complex<double>;

/// Coordinate layout on T*R^{1+d}.
///
/// Phase points and tangent vectors are flat real vectors ordered as
///   (t, x_1..x_d, tau, xi_1..xi_d),
/// so that base slot q and fiber slot q pair up under the symplectic form
/// with x_0 = t, xi_0 = tau.
struct Layout {
  int d = 0;  // number of space dimensions

  int size() const { return 2 * d + 2; }
  int t() const { return 0; }
  int x(int j) const { return 1 + j; }          // j in [0, d)
  int tau() const { return d + 1; }
  int xi(int j) const { return d + 2 + j; }     // j in [0, d)

  /// Base slot (x_q) and fiber slot (xi_q) for pair index q in [0, d].
  int base(int q) const { return q == 0 ? t() : x(q - 1); }
  int fiber(int q) const { return q == 0 ? tau() : xi(q - 1); }

  std::vector<std::string> names() const {
    std::vector<std::string> out(size());
    out[t()] = "t";
    out[tau()] = "tau";
    for (int j = 0; j < d; ++j) {
      out[x(j)] = "x" + std::to_string(j + 1);
      out[xi(j)] = "xi" + std::to_string(j + 1);
    }
    return out;
  }
};

/// Tangent vector of T*R^{1+d}, components in Layout order.
using PhaseVector = Eigen::VectorXd;

/// A point of T*R^{1+d}, components in Layout order.
struct CotangentPoint {
  Layout layout;
  Eigen::VectorXd z;

  CotangentPoint() = default;
  CotangentPoint(Layout lay, Eigen::VectorXd coords) : layout(lay), z(std::move(coords)) {
    if (z.size() != layout.size()) throw config_error("CotangentPoint: coordinate size mismatch");
  }

  double t() const { return z[layout.t()]; }
  double x(int j) const { return z[layout.x(j)]; }
  double tau() const { return z[layout.tau()]; }
  double xi(int j) const { return z[layout.xi(j)]; }

  /// |(tau, xi)|, the size of the conic variable.
  double covector_norm() const {
    double s = tau() * tau();
    for (int j = 0; j < layout.d; ++j) s += xi(j) * xi(j);
    return std::sqrt(s);
  }
};

/// Convenience builder: point from named parts.
inline CotangentPoint make_point(int d, double t, const Eigen::VectorXd& x, double tau,
                                 const Eigen::VectorXd& xi) {
  Layout lay{d};
  if (x.size() != d || xi.size() != d) throw config_error("make_point: x/xi size mismatch");
  Eigen::VectorXd z(lay.size());
  z[lay.t()] = t;
  z[lay.tau()] = tau;
  for (int j = 0; j < d; ++j) {
    z[lay.x(j)] = x[j];
    z[lay.xi(j)] = xi[j];
  }
  return CotangentPoint(lay, z);
}

/// Symplectic pairing sigma(X, Y) = sum_q (Xi^X_q Xbase^Y_q - Xbase^X_q Xi^Y_q).
double sigma_pairing(const Layout& lay, const PhaseVector& X, const PhaseVector& Y);

}  // namespace hypan
