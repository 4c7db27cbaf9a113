#pragma once

// Catalog of Legendre functions f on R^n together with their conjugates,
// gradients, Hessians, Bregman distances and the l^p duality mapping.
//
// Essential smoothness and essential strict convexity hold analytically for
// every entry:
//   euclidean        f = 1/2|x|^2           dom f = dom f* = R^n
//   quadratic_spd    f = 1/2<x, M x>        M symmetric positive definite
//   pnorm_energy     f = 1/2|x|_p^2         f* = 1/2|.|_{p'}^2, 1 < p < oo
//   shannon_entropy  f = sum x log x - x    dom f = closed orthant, f* = exp_sum
//   exp_sum          f = sum exp(x)         conjugate of shannon_entropy
// Local boundedness of the subdifferential is automatic in finite dimension
// and is not tested.

#include <string>

#include "moreau/space.hpp"

namespace moreau {

enum class DomainKind { full_space, open_positive_orthant, closed_positive_orthant };

/// Domain descriptor. Orthant kinds may be translated: {x : x >= lower}.
struct DomainSpec {
  DomainKind kind = DomainKind::full_space;
  Vec lower;           // translation of the orthant; zero for the standard one
  Vec interior_point;  // witness in the interior

  static DomainSpec full(Index n);
  static DomainSpec open_orthant(Vec lower);
  static DomainSpec closed_orthant(Vec lower);

  Index dim() const { return interior_point.size(); }
  bool contains(const Vec& x) const;
  bool contains_interior(const Vec& x) const;
  std::string describe() const;
};

class LegendreFunction {
 public:
  enum class Kind { euclidean, quadratic_spd, pnorm_energy, shannon_entropy, exp_sum };

  static LegendreFunction euclidean(Index n);
  /// Throws UsageError unless M is symmetric to 1e-12 with positive spectrum.
  static LegendreFunction quadratic_spd(const Mat& m);
  static LegendreFunction pnorm_energy(Index n, double p);
  static LegendreFunction shannon_entropy(Index n);
  static LegendreFunction exp_sum(Index n);

  Kind kind() const { return kind_; }
  /// Family name, used as registry and ledger key.
  const std::string& name() const { return name_; }
  /// Family name plus parameters, for reports.
  std::string label() const;
  Index dim() const { return dim_; }
  const DomainSpec& dom_f() const { return dom_f_; }
  const DomainSpec& dom_fstar() const { return dom_fstar_; }
  bool supercoercive() const { return supercoercive_; }
  double exponent() const { return p_; }
  const Mat& matrix() const { return m_; }

  /// f* as a Legendre function on X* (identified with R^n).
  LegendreFunction conjugate() const;

  // Coordinate kernels. value() returns +inf outside dom f; gradient() and
  // hessian() assume an interior point.
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;
  double conj_value(const Vec& s) const;
  Vec conj_gradient(const Vec& s) const;

 private:
  LegendreFunction() = default;

  Kind kind_ = Kind::euclidean;
  std::string name_;
  Index dim_ = 0;
  DomainSpec dom_f_;
  DomainSpec dom_fstar_;
  bool supercoercive_ = true;
  double p_ = 2.0;
  Mat m_;
  Mat m_inv_;
};

/// f(x) in (-oo, +oo]; +inf exactly off dom f.
double eval_f(const LegendreFunction& f, const PrimalVector& x);
/// Throws DomainError off int dom f.
DualVector grad_f(const LegendreFunction& f, const PrimalVector& x);
double eval_conj(const LegendreFunction& f, const DualVector& xstar);
/// Throws DomainError off int dom f*.
PrimalVector grad_conj(const LegendreFunction& f, const DualVector& xstar);

/// D_f(y, x) = f(y) - f(x) - <y - x, grad f(x)> when x in int dom f, +inf
/// otherwise.
double bregman(const LegendreFunction& f, const PrimalVector& y, const PrimalVector& x);
double bregman(const LegendreFunction& f, const Vec& y, const Vec& x);

/// J = grad(1/2|.|_p^2). Checks <x, Jx> = |x|_p^2 = |Jx|_{p'}^2.
DualVector duality_map(double p, const PrimalVector& x);

}  // namespace moreau
