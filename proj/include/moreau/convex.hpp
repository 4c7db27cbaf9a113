#pragma once

// Catalog of functions phi in Gamma_0(R^n): values, closed-form conjugates,
// Euclidean proximity maps and their Jacobians, Fenchel-Young gaps, and the
// closed convex cones used by the conic decompositions.

#include <optional>
#include <string>

#include "moreau/space.hpp"

namespace moreau {

/// Slack used by every set-membership test (indicators, cones, singletons):
/// a point counts as a member when its distance to the set is at most
/// kFeasibilityTol * (1 + |x|_inf).
inline constexpr double kFeasibilityTol = 1e-9;

class ConeSpec {
 public:
  enum class Kind { nonneg_orthant, second_order, subspace, halfspace, ray };

  static ConeSpec nonneg_orthant(Index n);
  /// {(t, u) : |u|_2 <= t}, axis along the first coordinate; n >= 2.
  static ConeSpec second_order(Index n);
  /// Span of the columns of `generators` (n x k, k may be 0).
  static ConeSpec subspace(const Mat& generators);
  /// {x : <a, x> <= 0}.
  static ConeSpec halfspace(const Vec& normal);
  /// {t a : t >= 0}.
  static ConeSpec ray(const Vec& direction);

  Kind kind() const { return kind_; }
  bool reflected() const { return reflected_; }
  Index dim() const { return dim_; }
  std::string name() const;

  /// -K.
  ConeSpec negated() const;
  /// K^- = {x* : <x, x*> <= 0 for all x in K}.
  ConeSpec polar() const;

  /// Euclidean projection P_K.
  Vec project(const Vec& x) const;
  /// A generalized Jacobian of P_K at x.
  Mat project_jacobian(const Vec& x) const;
  bool contains(const Vec& x, double tol = kFeasibilityTol) const;
  /// Orthonormal basis (subspace kind only).
  const Mat& basis() const { return basis_; }
  const Vec& direction() const { return dir_; }

 private:
  ConeSpec() = default;
  Vec project_unreflected(const Vec& x) const;
  Mat jacobian_unreflected(const Vec& x) const;

  Kind kind_ = Kind::nonneg_orthant;
  bool reflected_ = false;
  Index dim_ = 0;
  Mat basis_;  // subspace
  Vec dir_;    // halfspace normal / ray direction
};

/// Domain descriptor of phi.
struct PhiDomain {
  enum class Kind { full_space, cone, box, point };
  Kind kind = Kind::full_space;
  std::optional<ConeSpec> cone;
  Vec lo, hi;  // box
  Vec point;   // singleton
  std::string describe() const;
};

class ConvexFunction {
 public:
  enum class Kind { zero, linear, l1, box, box_support, singleton, cone_indicator, quadratic };

  static ConvexFunction zero(Index n);
  /// <c, .>
  static ConvexFunction linear(const Vec& c);
  /// lambda |.|_1, lambda > 0.
  static ConvexFunction l1(Index n, double lambda);
  /// Indicator of [lo, hi], lo <= hi componentwise.
  static ConvexFunction box(const Vec& lo, const Vec& hi);
  /// Support function of [lo, hi]: sum_i max(lo_i s_i, hi_i s_i).
  static ConvexFunction box_support(const Vec& lo, const Vec& hi);
  /// Indicator of {c}.
  static ConvexFunction singleton(const Vec& c);
  static ConvexFunction indicator(const ConeSpec& cone);
  /// 1/2<x, Q x> + <c, x> + offset with Q symmetric positive semidefinite.
  static ConvexFunction quadratic(const Mat& q, const Vec& c, double offset = 0.0);

  Kind kind() const { return kind_; }
  /// Family name, used as registry and ledger key.
  std::string name() const;
  std::string label() const;
  Index dim() const { return dim_; }
  bool bounded_below() const { return bounded_below_; }
  const PhiDomain& domain() const { return domain_; }
  const std::optional<ConeSpec>& cone() const { return domain_.cone; }
  double lambda() const { return lambda_; }
  const Vec& vector() const { return c_; }

  /// phi* as a catalog entry. Throws UnsupportedError for a quadratic with
  /// singular Q (its conjugate value is still available through
  /// conjugate_value()).
  ConvexFunction conjugate() const;

  double value(const Vec& x) const;
  double conjugate_value(const Vec& s) const;
  /// argmin_y gamma*phi(y) + 1/2|x - y|^2.
  Vec prox(const Vec& x, double gamma) const;
  /// A generalized Jacobian of prox_{gamma phi} at x.
  Mat prox_jacobian(const Vec& x, double gamma) const;
  /// prox_{gamma phi}(y + u) - y, evaluated without forming y + u on the
  /// pieces where the prox is a translation, so a small u keeps its
  /// relative precision.
  Vec prox_step(const Vec& y, const Vec& u, double gamma) const;

 private:
  ConvexFunction() = default;

  Kind kind_ = Kind::zero;
  Index dim_ = 0;
  bool bounded_below_ = true;
  PhiDomain domain_;
  double lambda_ = 0.0;
  double offset_ = 0.0;
  Vec c_;
  Vec lo_, hi_;
  Mat q_;
  Mat q_pinv_;   // pseudo-inverse of Q
  Mat q_range_;  // orthogonal projector onto range Q
};

double eval_phi(const ConvexFunction& phi, const PrimalVector& x);
double eval_conj_phi(const ConvexFunction& phi, const DualVector& xstar);
PrimalVector euclid_prox(const ConvexFunction& phi, const PrimalVector& x, double gamma = 1.0);

/// phi(x) + phi*(x*) - <x, x*>: clipped to 0 when within `tol` below zero,
/// +inf when either value is +inf. A value <= gap_tol certifies
/// x* in d phi(x).
double fenchel_young_gap(const ConvexFunction& phi, const PrimalVector& x, const DualVector& xstar,
                         double tol = 1e-8);
double fenchel_young_gap(const ConvexFunction& phi, const Vec& x, const Vec& xstar,
                         double tol = 1e-8);

/// P_{K^-} x (Euclidean).
PrimalVector polar_project(const ConeSpec& cone, const PrimalVector& x);

}  // namespace moreau
