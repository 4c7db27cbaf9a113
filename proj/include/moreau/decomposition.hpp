#pragma once

// Generalized Moreau decomposition x = aprox(x) + grad f*(bprox*(grad f(x)))
// with residuals of the four identities, the Hilbert special cases, and the
// resolvent form with A = d phi.

#include <cstdint>
#include <string>
#include <vector>

#include "moreau/prox.hpp"

namespace moreau {

/// One numerical assertion: value <= bound.
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  void add(std::string name, double value, double bound);
  void merge(const SuiteReport& other);
  std::size_t passed() const;
  std::size_t failed() const;
  bool ok() const { return failed() == 0; }
  /// Largest value recorded under `name`; -inf when absent.
  double max_value(const std::string& name) const;
};

struct DecompositionReport {
  std::string geometry;
  std::string phi;
  std::uint64_t seed = 0;
  PrimalVector x;
  /// aprox term.
  PrimalVector p;
  /// bprox^{f*}_{phi*}(grad f(x)) from the dual-side solve.
  DualVector dstar;
  /// grad f(x - p), the primal formula for the same point.
  DualVector dstar_primal;
  /// p + grad f*(dstar).
  PrimalVector reconstruction;

  double f_value = 0.0;
  double infconv_value = 0.0;
  double diamond_value = 0.0;
  double residual_i = kInf;
  double residual_ii = kInf;
  double residual_iii = kInf;
  double residual_iv = kInf;
  /// |dstar - dstar_primal|.
  double dstar_gap = kInf;
  double aprox_inclusion = kInf;
  double bprox_inclusion = kInf;

  bool cq_primal = false;
  bool cq_dual = false;
  bool converged = false;
  int iterations = 0;
  int newton_steps = 0;
};

/// Requires cq_dual and x in int dom f and in int(dom f + dom phi).
DecompositionReport decompose(const LegendreFunction& f, const ConvexFunction& phi,
                              const PrimalVector& x, const ProxOptions& opts = {},
                              std::uint64_t seed = 0);

/// The four identities and the dstar consistency as checks:
///   residual_i   <= value_tol (1 + |f(x)|)
///   residual_ii  <= vector_tol (1 + |x|)
///   residual_iii <= gap_tol, residual_iv <= gap_tol
///   dstar_gap    <= vector_tol (1 + |grad f(x - p)|)
void add_theorem_checks(SuiteReport& out, const DecompositionReport& r,
                        const ToleranceProfile& tol);

/// Orthogonal, conic and Moreau decompositions in R^n with f = 1/2|.|^2 on
/// `count` seeded points, cycling through `dims`.
SuiteReport verify_hilbert_special_cases(std::uint64_t seed, const ToleranceProfile& tol = {},
                                         int count = 100, std::vector<Index> dims = {2, 5, 16});

/// Resolvent form with A = d phi: grad f(x - p) in A p, p in A^{-1} dstar,
/// x = p + grad f*(dstar). In the Euclidean case also
/// x = (Id + A)^{-1} x + (Id + A^{-1})^{-1} x through the closed-form prox
/// (bound 1e-8 (1 + |x|)).
SuiteReport verify_resolvent(const LegendreFunction& f, const ConvexFunction& phi,
                             const PrimalVector& x, const ProxOptions& opts = {});
SuiteReport verify_resolvent(const LegendreFunction& f, const ConvexFunction& phi,
                             const DecompositionReport& r, const ToleranceProfile& tol);

}  // namespace moreau
