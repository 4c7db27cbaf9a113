#pragma once

// Anisotropic and Bregman proximity operators, their preconditions, and the
// pairing ledger that records qualification conditions per (f, phi).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "moreau/convex.hpp"
#include "moreau/legendre.hpp"
#include "moreau/solvers.hpp"

namespace moreau {

/// Qualification flags for one (geometry, phi) family pair:
///   cq_primal  0 in sri(dom f - dom phi)
///   cq_dual    0 in sri(dom f* - dom phi*)
/// `bprox_set` documents where bprox is defined for the pair, i.e.
/// int dom f intersected with grad f*(int(dom f* + dom phi*)).
struct PairingEntry {
  std::string geometry;
  std::string phi;
  bool cq_primal = false;
  bool cq_dual = false;
  std::string justification;
  std::string bprox_set = "int dom f";
  /// Optional parameter-level check of cq_primal (e.g. a box that must meet
  /// the open orthant). When present and false, cq_primal is withdrawn.
  std::function<bool(const LegendreFunction&, const ConvexFunction&)> witness;
};

struct Certification {
  bool cq_primal = false;
  bool cq_dual = false;
  bool automatic = false;
  std::string justification;
};

class PairingLedger {
 public:
  void register_pairing(PairingEntry entry);
  const std::vector<PairingEntry>& entries() const { return entries_; }

  /// Full-space domains certify a flag on their own. Otherwise the pair is
  /// looked up, then its conjugate pair (f*, phi*) with the flags swapped.
  /// nullopt when nothing applies.
  std::optional<Certification> certify(const LegendreFunction& f, const ConvexFunction& phi) const;

  /// Ledger shipped with the catalog.
  static const PairingLedger& standard();

 private:
  const PairingEntry* find(const std::string& geometry, const std::string& phi) const;
  std::vector<PairingEntry> entries_;
};

/// int(dom f + dom phi) for the shipped domain kinds: the full space or an
/// open translated orthant {x > lower}. Throws UnsupportedError for other
/// combinations rather than guessing.
struct SumInterior {
  bool full = true;
  Vec lower;

  bool contains(const Vec& x) const;
  std::string describe() const;
};
SumInterior sum_interior(const DomainSpec& dom_f, const PhiDomain& dom_phi);

struct ProxOptions {
  ToleranceProfile tol;
  SolverOptions solver;
  std::optional<Vec> init;
  /// nullptr selects PairingLedger::standard().
  const PairingLedger* ledger = nullptr;
};

struct ProxResult {
  PrimalVector point;
  /// Fenchel-Young gap of the characterizing inclusion at `point`.
  double inclusion_residual = kInf;
  SolveResult solve;
};

struct DualProxResult {
  DualVector point;
  double inclusion_residual = kInf;
  SolveResult solve;
};

/// argmin_y phi(y) + f(x - y), characterized by grad f(x - p) in d phi(p).
/// Requires cq_dual and x in int(dom f + dom phi); throws PreconditionError
/// naming the failed hypothesis.
ProxResult aprox(const LegendreFunction& f, const ConvexFunction& phi, const PrimalVector& x,
                 const ProxOptions& opts = {});

/// argmin_y phi(y) + D_f(y, x), characterized by grad f(x) - grad f(p) in
/// d phi(p). Requires cq_primal, x in int dom f (DomainError otherwise) and
/// one of the existence conditions: f supercoercive, phi bounded below,
/// int dom f* inside int(dom f* + dom phi*), or
/// grad f(x) in int(dom f* + dom phi*).
ProxResult bprox(const LegendreFunction& f, const ConvexFunction& phi, const PrimalVector& x,
                 const ProxOptions& opts = {});

/// bprox^{f*}_{phi*}(x*), solved on the dual side.
DualProxResult bprox_conjugate(const LegendreFunction& f, const ConvexFunction& phi,
                               const DualVector& xstar, const ProxOptions& opts = {});

/// Which existence condition admits bprox(f, phi, x); empty when none does.
std::string bprox_existence(const LegendreFunction& f, const ConvexFunction& phi, const Vec& x);

/// Generalized projector onto K in the l^p geometry:
/// argmin_{y in K} |x|^2 - 2<y, Jx> + |y|^2.
PrimalVector gen_project(const ConeSpec& cone, double p, const PrimalVector& x,
                         const ProxOptions& opts = {});

}  // namespace moreau
