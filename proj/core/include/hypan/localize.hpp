#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "hypan/phase.hpp"
#include "hypan/poly.hpp"
#include "hypan/symbol.hpp"

namespace hypan {

/// Kernel/cokernel data at a characteristic point.
///
/// kernel_basis holds an orthonormal basis of ker L(rho); the cokernel
/// projector is normalized so that projector * kernel_basis = I_r, which
/// makes the localized system canonical up to similarity (its determinant
/// polynomial is then basis-independent).
struct CharacteristicData {
  CotangentPoint rho;
  int r = 0;
  Eigen::MatrixXcd kernel_basis;        // N x r, orthonormal columns
  Eigen::MatrixXcd cokernel_projector;  // r x N, annihilates range L(rho)
};

/// The localized system at rho: a linear map in the 2d+2 phase directions
/// with r x r matrix values, plus its determinant polynomial.
struct LocalizedSystem {
  CharacteristicData base;
  std::vector<Eigen::MatrixXcd> maps;  // one r x r matrix per phase coordinate
  Polynomial det_poly;                 // homogeneous of degree r in phase variables

  Eigen::MatrixXcd apply(const PhaseVector& delta) const;
};

struct LocalizeOptions {
  double kernel_rel_tol = 1e-10;   // singular values below this * sigma_max are zero
  double char_rel_tol = 1e-8;      // |det| below this * scale^N counts as characteristic
};

/// Kernel basis, multiplicity and cokernel projector at a characteristic
/// point. Throws assumption_error at non-characteristic points and when the
/// geometric multiplicity falls short of the eigenvalue multiplicity.
CharacteristicData characteristic_data(const SystemSymbol& sys, const CotangentPoint& rho,
                                       const LocalizeOptions& opt = {});

/// First-order germ of the symbol at rho compressed to ker L(rho).
/// All phase derivatives are exact polynomial derivatives.
LocalizedSystem localize(const SystemSymbol& sys, const CotangentPoint& rho,
                         const LocalizeOptions& opt = {});

struct StrictHyperbolicityResult {
  bool verdict = false;
  PhaseVector witness;          // failing transverse direction when verdict is false
  int samples_checked = 0;
};

struct StrictHyperbolicityOptions {
  int samples = 200;
  unsigned seed = 20240901;
  double gap_rel_tol = 1e-7;    // pairwise root gap relative to root scale
  double tangent_dep_tol = 1e-9;
};

/// Strict hyperbolicity of det_poly in the time direction on the Euclidean
/// complement of span(tangent_basis): for random transverse directions v the
/// polynomial s -> det_poly(v + s*theta_time) must have r distinct real roots.
StrictHyperbolicityResult transversal_strict_hyperbolicity(
    const LocalizedSystem& sys, const std::vector<PhaseVector>& tangent_basis,
    const StrictHyperbolicityOptions& opt = {});

struct DiagonalizabilityReport {
  double max_condition = 0.0;
  double arg_t = 0.0;
  Eigen::VectorXd arg_x, arg_xi;
  std::vector<int> flagged;  // indices of cloud points violating semisimplicity
};

struct CloudPoint {
  double t = 0.0;
  Eigen::VectorXd x, xi;  // |xi| = 1 expected
};

/// Condition number of the clustered-orthonormal eigenvector matrix of
/// A(t, x, xi) over a point cloud; the supremum is the diagonalizability
/// figure of merit.
DiagonalizabilityReport uniform_diagonalizability_probe(const SystemSymbol& sys,
                                                        const std::vector<CloudPoint>& cloud);

struct SymmetrizerProbeResult {
  double limit_gap = 0.0;
  Eigen::MatrixXcd limit1, limit2;
  bool converged = false;
};

/// Distance between the limits of the canonical symmetrizer
/// S = sum_i P_i^* P_i (P_i spectral projectors of A(t,x,xi)) along two
/// parametrized paths; limits by Richardson extrapolation over 2^{-k}.
SymmetrizerProbeResult symmetrizer_discontinuity_probe(
    const SystemSymbol& sys, const std::function<CloudPoint(double)>& path1,
    const std::function<CloudPoint(double)>& path2, int levels = 10);

/// Adjugate of the symbol at rho: L(rho) * M(rho) = det L(rho) * I.
Eigen::MatrixXcd cofactor_symbol(const SystemSymbol& sys, const CotangentPoint& rho);

/// Adjugate of the symbol as a polynomial matrix.
PolyMatrix cofactor_symbol_poly(const SystemSymbol& sys);

struct VanishingOrderResult {
  int order = 0;                 // nearest-integer slope; order_infinite if f ~ 0 on the ray
  double slope = 0.0;            // raw least-squares slope
  double residual = 0.0;         // rms residual of the log-log fit
  bool reliable = false;
  static constexpr int order_infinite = 1 << 20;
};

struct VanishingOrderOptions {
  int k_min = 3, k_max = 12;     // dyadic ladder s = 2^{-k}
  double underflow_guard = 1e-14;
  double residual_threshold = 0.1;
};

/// Least-squares slope of log|f(rho + s v)| against log s on a dyadic
/// ladder; estimates the vanishing order of f along the ray.
VanishingOrderResult vanishing_order(const std::function<cplx(const Eigen::VectorXd&)>& f,
                                     const Eigen::VectorXd& rho, const Eigen::VectorXd& v,
                                     const VanishingOrderOptions& opt = {});

/// Lower-order terms of (L + B) composed with the adjugate M:
/// P_{r-j} = sum_{l+|alpha|=j} (-i)^j d_t^l d_x^alpha (L+B) d_tau^l d_xi^alpha M,
/// for j = 0..max_j (max_j <= 2). B is a constant matrix (may be zero).
std::vector<PolyMatrix> composition_lower_order_terms(const SystemSymbol& sys,
                                                      const Eigen::MatrixXcd& B, int max_j);

}  // namespace hypan
