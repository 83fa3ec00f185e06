#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "hypan/phase.hpp"
#include "hypan/poly.hpp"

namespace hypan {

/// A submanifold of T*R^{1+d} given by polynomial defining functions.
struct ManifoldChart {
  Layout layout;
  std::vector<Polynomial> defining_functions;  // real-coefficient polynomials

  int codim() const { return static_cast<int>(defining_functions.size()); }

  /// Gradient matrix (codim x 2d+2) at rho; throws assumption_error when
  /// the gradients are dependent there.
  Eigen::MatrixXd gradients(const Eigen::VectorXd& rho) const;
};

struct TangentSpaceResult {
  Eigen::MatrixXd tangent;        // columns: orthonormal basis of T_rho Sigma
  Eigen::MatrixXd sigma_orthogonal;  // columns: basis of (T_rho Sigma)^sigma
};

/// T_rho Sigma as the null space of the gradient matrix; its
/// sigma-orthogonal space spanned by the Hamilton vectors of the
/// defining functions.
TangentSpaceResult tangent_space(const ManifoldChart& chart, const Eigen::VectorXd& rho);

/// Hamilton vector of f at rho with the bracket convention
/// {f,g} = sum_q (df/dxi_q dg/dx_q - df/dx_q dg/dxi_q), i.e. H_f g = {g,f}.
PhaseVector hamilton_vector(const Layout& lay, const Polynomial& f, const Eigen::VectorXd& rho);

/// Poisson bracket {f, g} evaluated at rho.
double poisson_bracket(const Layout& lay, const Polynomial& f, const Polynomial& g,
                       const Eigen::VectorXd& rho);

enum class ManifoldClass { involutive, symplectic, neither };

struct ClassifyOptions {
  double bracket_tol = 1e-9;
  double rank_rel_tol = 1e-9;
};

/// Involutive iff all pairwise brackets of the defining functions vanish
/// at rho; symplectic iff sigma restricts nondegenerately to the tangent
/// space; otherwise neither.
ManifoldClass classify_manifold(const ManifoldChart& chart, const Eigen::VectorXd& rho,
                                const ClassifyOptions& opt = {});

enum class ConeVerdict { member, boundary, non_member, indeterminate };

/// Hyperbolicity cone of a homogeneous polynomial with respect to the
/// time direction theta, and its sigma-polar propagation cone.
class ConeOracle {
 public:
  struct Options {
    int gamma_check_samples = 64;     // lazy hyperbolicity verification budget
    int polar_samples = 2000;         // ray samples for the polar stage
    unsigned seed = 19770401;
    double root_tol = 1e-7;
    double sigma_rel_tol = 1e-9;
    double margin = 1e-6;             // certified-membership slack
  };

  ConeOracle(Layout lay, Polynomial p, PhaseVector theta);
  ConeOracle(Layout lay, Polynomial p, PhaseVector theta, Options opt);

  const Polynomial& polynomial() const { return p_; }
  const PhaseVector& theta() const { return theta_; }

  /// Directions along which the polynomial is constant (the cone contains
  /// full lines there). Columns form an orthonormal basis.
  const Eigen::MatrixXd& lineality() const { return lineality_; }

  /// Hyperbolicity cone membership: all roots of s -> p(X + s theta)
  /// strictly negative. A zero root within tolerance gives `boundary`.
  ConeVerdict hyperbolicity_membership(const PhaseVector& X) const;

  /// Propagation cone membership: sigma(X, .) vanishes on the lineality
  /// (exact linear stage) and sigma(X, Y) <= tol for sampled rays Y in the
  /// hyperbolicity cone.
  ConeVerdict propagation_membership(const PhaseVector& X) const;

  /// Sampled rays of the hyperbolicity cone used by the polar stage
  /// (unit vectors in the essential subspace).
  const std::vector<PhaseVector>& gamma_rays() const { return rays_; }

 private:
  void verify_hyperbolic() const;
  void build_rays();

  Layout lay_;
  Polynomial p_;
  PhaseVector theta_;
  Options opt_;
  Eigen::MatrixXd lineality_;       // orthonormal columns
  Eigen::MatrixXd essential_;       // orthonormal complement of the lineality
  std::vector<PhaseVector> rays_;
  mutable bool hyperbolicity_checked_ = false;
};

struct ConeInclusionReport {
  bool c_subset_sigma_orth = false;
  bool c_meets_tangent = false;      // C intersect T Sigma != {0}
  bool c_strictly_larger = false;    // C intersect T Sigma strictly inside C
  bool indeterminate = false;
  PhaseVector witness_in_tangent;    // member of C intersect T Sigma (if any)
  PhaseVector witness_outside_tangent;  // member of C \ T Sigma (if any)
};

/// Inclusion relations between the propagation cone, T Sigma and its
/// sigma-orthogonal space, decided by membership queries on sampled and
/// candidate rays.
ConeInclusionReport cone_inclusion_report(const ConeOracle& cone, const ManifoldChart& chart,
                                          const Eigen::VectorXd& rho);

struct Trajectory {
  std::vector<Eigen::VectorXd> points;  // phase-space points, Layout order
  std::vector<double> h_values;
  bool hit_multiple_characteristic = false;
};

/// Integrates the Hamilton equations of h with classical RK4:
/// base' = dh/dfiber, fiber' = -dh/dbase. Stops early when the gradient
/// degenerates (multiple characteristic).
Trajectory bicharacteristic_flow(const Layout& lay, const Polynomial& h,
                                 const Eigen::VectorXd& rho0, double dt, int steps,
                                 double grad_tol = 1e-12);

struct ScaledLimitResult {
  PhaseVector limit;         // normalized limit of the Hamilton directions
  ConeVerdict membership = ConeVerdict::indeterminate;
  bool converged = false;
};

/// Normalized Hamilton directions along a sequence of simple
/// characteristics approaching rho; the limit is tested for propagation
/// cone membership (boundary allowed).
ScaledLimitResult scaled_limit_in_cone(const Layout& lay, const Polynomial& h,
                                       const ConeOracle& cone,
                                       const std::vector<Eigen::VectorXd>& approach_sequence,
                                       double dir_tol = 1e-6);

}  // namespace hypan
