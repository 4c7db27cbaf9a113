#include "moreau/prox.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace moreau {

namespace {

bool phi_domain_full(const PhiDomain& d) { return d.kind == PhiDomain::Kind::full_space; }

// dom phi* when phi* has a catalog entry; nullopt otherwise.
std::optional<PhiDomain> conjugate_domain(const ConvexFunction& phi) {
  try {
    return phi.conjugate().domain();
  } catch (const UnsupportedError&) {
    return std::nullopt;
  }
}

bool primal_auto(const LegendreFunction& f, const ConvexFunction& phi) {
  return f.dom_f().kind == DomainKind::full_space || phi_domain_full(phi.domain());
}

bool dual_auto(const LegendreFunction& f, const ConvexFunction& phi) {
  if (f.dom_fstar().kind == DomainKind::full_space) return true;
  const auto d = conjugate_domain(phi);
  return d && phi_domain_full(*d);
}

const PairingLedger& resolve(const ProxOptions& opts) {
  return opts.ledger ? *opts.ledger : PairingLedger::standard();
}

void require_dims(const LegendreFunction& f, const ConvexFunction& phi, Index n) {
  if (f.dim() != phi.dim() || f.dim() != n) {
    throw UsageError("dimension mismatch between geometry, phi and point");
  }
}

std::string pair_label(const LegendreFunction& f, const ConvexFunction& phi) {
  return "(" + f.label() + ", " + phi.label() + ")";
}

ProxResult run_bprox(const LegendreFunction& f, const ConvexFunction& phi, const Vec& x,
                     const ProxOptions& opts) {
  const Vec g = f.gradient(x);
  const DomainSpec& dom = f.dom_f();

  CompositeProblem prob{
      [&f, g](const Vec& y) { return f.value(y) - y.dot(g); },
      [&f, g](const Vec& y) { return Vec(f.gradient(y) - g); },
      [&f](const Vec& y) { return f.hessian(y); },
      phi,
      [&dom](const Vec& y) { return dom.contains_interior(y); },
      opts.init ? *opts.init : Vec(dom.interior_point + 0.5 * (x - dom.interior_point)),
  };
  SolverOptions so = opts.solver;
  SolveResult s = minimize_composite(prob, opts.tol, so);

  ProxResult out{PrimalVector(s.minimizer), kInf, {}};
  out.inclusion_residual =
      fenchel_young_gap(phi, s.minimizer, Vec(g - f.gradient(s.minimizer)), opts.tol.value_tol);
  out.solve = std::move(s);
  return out;
}

// A point y in dom phi with x - y in int dom f. The midpoint rule comes
// first; otherwise walk prox_phi(x - z) with z pushed into int dom f.
Vec aprox_start(const LegendreFunction& f, const ConvexFunction& phi, const Vec& x) {
  const DomainSpec& dom = f.dom_f();
  const Vec& w = dom.interior_point;
  auto ok = [&](const Vec& y) {
    return dom.contains_interior(Vec(x - y)) && std::isfinite(phi.value(y)) &&
           std::isfinite(f.value(Vec(x - y)));
  };
  const Vec z0 = w + 0.5 * (x - w);
  if (dom.contains_interior(z0)) {
    const Vec y0 = x - z0;
    if (ok(y0)) return y0;
    const Vec y1 = phi.prox(y0, 1.0);
    if (ok(y1)) return y1;
  }
  const Vec dir = w - dom.lower;
  for (double s = 1.0; s < 1e12; s *= 2.0) {
    const Vec y = phi.prox(Vec(x - dom.lower - s * dir), 1.0);
    if (ok(y)) return y;
  }
  throw InfeasibleStartError("aprox: no y in dom phi with x - y in int dom f for " +
                             pair_label(f, phi));
}

}  // namespace

// ---------------------------------------------------------------------------
// Ledger

void PairingLedger::register_pairing(PairingEntry entry) {
  if (entry.geometry.empty() || entry.phi.empty()) {
    throw UsageError("register_pairing: geometry and phi names are required");
  }
  for (auto& e : entries_) {
    if (e.geometry == entry.geometry && e.phi == entry.phi) {
      e = std::move(entry);
      return;
    }
  }
  entries_.push_back(std::move(entry));
}

const PairingEntry* PairingLedger::find(const std::string& geometry, const std::string& phi) const {
  for (const auto& e : entries_) {
    if (e.geometry == geometry && e.phi == phi) return &e;
  }
  return nullptr;
}

std::optional<Certification> PairingLedger::certify(const LegendreFunction& f,
                                                    const ConvexFunction& phi) const {
  Certification c;
  const bool pa = primal_auto(f, phi);
  const bool da = dual_auto(f, phi);
  if (pa && da) {
    c.cq_primal = c.cq_dual = true;
    c.automatic = true;
    c.justification = "full-space domains";
    return c;
  }
  if (const PairingEntry* e = find(f.name(), phi.name())) {
    c.cq_primal = pa || (e->cq_primal && (!e->witness || e->witness(f, phi)));
    c.cq_dual = da || e->cq_dual;
    c.justification = e->justification;
    return c;
  }
  try {
    const LegendreFunction fc = f.conjugate();
    const ConvexFunction pc = phi.conjugate();
    if (const PairingEntry* e = find(fc.name(), pc.name())) {
      c.cq_primal = pa || e->cq_dual;
      c.cq_dual = da || (e->cq_primal && (!e->witness || e->witness(fc, pc)));
      c.justification = "conjugate pair: " + e->justification;
      return c;
    }
  } catch (const UnsupportedError&) {
  }
  return std::nullopt;
}

const PairingLedger& PairingLedger::standard() {
  static const PairingLedger ledger = [] {
    PairingLedger l;
    const char* full_geoms[] = {"euclidean", "quadratic_spd", "pnorm_energy"};
    const char* phis[] = {"zero",        "linear",          "l1",
                          "box",         "box_support",     "singleton",
                          "nonneg_orthant", "nonpos_orthant", "second_order_cone",
                          "polar_second_order_cone", "subspace", "halfspace",
                          "ray",         "quadratic"};
    for (const char* g : full_geoms) {
      for (const char* p : phis) {
        l.register_pairing({g, p, true, true, "dom f = dom f* = R^n", "int dom f = R^n", {}});
      }
    }

    // Entropy: dom f* = R^n, so cq_dual always holds and the bprox set is
    // the whole open orthant.
    const std::string ent = "shannon_entropy";
    const std::string open = "open orthant";
    for (const char* p : {"zero", "linear", "l1", "box_support", "quadratic"}) {
      l.register_pairing({ent, p, true, true, "dom phi = R^n and dom f* = R^n", open, {}});
    }
    l.register_pairing({ent, "nonneg_orthant", true, true,
                        "dom f - K = R^n_+ - R^n_+ = R^n", open, {}});
    l.register_pairing({ent, "second_order_cone", true, true,
                        "int K meets the open orthant, so dom f - K is a neighbourhood of 0",
                        open, {}});
    l.register_pairing({ent, "nonpos_orthant", false, true,
                        "dom f - K = R^n_+ has 0 on its boundary", open, {}});
    l.register_pairing({ent, "box", true, true,
                        "requires hi > 0: then the box meets the open orthant",
                        open + "; conjugate side (exp_sum, box_support): {x : exp(x) > lo}",
                        [](const LegendreFunction&, const ConvexFunction& phi) {
                          return (phi.domain().hi.array() > 0.0).all();
                        }});
    l.register_pairing({ent, "singleton", true, true, "requires c > 0 (c in the open orthant)",
                        open, [](const LegendreFunction&, const ConvexFunction& phi) {
                          return (phi.domain().point.array() > 0.0).all();
                        }});

    return l;
  }();
  return ledger;
}

// ---------------------------------------------------------------------------
// Sum domains

bool SumInterior::contains(const Vec& x) const {
  if (!x.allFinite()) return false;
  if (full) return true;
  return x.size() == lower.size() && (x.array() > lower.array()).all();
}

std::string SumInterior::describe() const {
  if (full) return "R^n";
  std::ostringstream os;
  os << "{x > (" << lower.transpose() << ")}";
  return os.str();
}

SumInterior sum_interior(const DomainSpec& dom_f, const PhiDomain& dom_phi) {
  SumInterior s;
  if (dom_f.kind == DomainKind::full_space || dom_phi.kind == PhiDomain::Kind::full_space) {
    return s;
  }
  const Vec& l = dom_f.lower;
  switch (dom_phi.kind) {
    case PhiDomain::Kind::box:
      s.full = false;
      s.lower = l + dom_phi.lo;
      return s;
    case PhiDomain::Kind::point:
      s.full = false;
      s.lower = l + dom_phi.point;
      return s;
    case PhiDomain::Kind::cone: {
      const ConeSpec& k = *dom_phi.cone;
      if (k.kind() == ConeSpec::Kind::nonneg_orthant) {
        if (k.reflected()) return s;  // R^n_+ - R^n_+ = R^n
        s.full = false;
        s.lower = l;
        return s;
      }
      if (k.kind() == ConeSpec::Kind::second_order && k.reflected()) return s;
      break;
    }
    case PhiDomain::Kind::full_space:
      return s;
  }
  throw UnsupportedError("sum domain: " + dom_f.describe() + " + " + dom_phi.describe() +
                         " is not handled");
}

// ---------------------------------------------------------------------------
// Operators

ProxResult aprox(const LegendreFunction& f, const ConvexFunction& phi, const PrimalVector& x,
                 const ProxOptions& opts) {
  require_dims(f, phi, x.dim());
  const auto cert = resolve(opts).certify(f, phi);
  if (!cert || !cert->cq_dual) {
    throw PreconditionError("aprox " + pair_label(f, phi) +
                            ": 0 in sri(dom f* - dom phi*) is not certified");
  }
  const Vec& xv = x.coords();
  const SumInterior si = sum_interior(f.dom_f(), phi.domain());
  if (!si.contains(xv)) {
    throw PreconditionError("aprox " + pair_label(f, phi) + ": x is not in int(dom f + dom phi) = " +
                            si.describe());
  }
  const DomainSpec& dom = f.dom_f();
  CompositeProblem prob{
      [&f, xv](const Vec& y) { return f.value(Vec(xv - y)); },
      [&f, xv](const Vec& y) { return Vec(-f.gradient(Vec(xv - y))); },
      [&f, xv](const Vec& y) { return f.hessian(Vec(xv - y)); },
      phi,
      [&dom, xv](const Vec& y) { return dom.contains_interior(Vec(xv - y)); },
      opts.init ? *opts.init : aprox_start(f, phi, xv),
  };
  SolveResult s = minimize_composite(prob, opts.tol, opts.solver);
  ProxResult out{PrimalVector(s.minimizer), kInf, {}};
  out.inclusion_residual = fenchel_young_gap(phi, s.minimizer, f.gradient(Vec(xv - s.minimizer)),
                                             opts.tol.value_tol);
  out.solve = std::move(s);
  return out;
}

std::string bprox_existence(const LegendreFunction& f, const ConvexFunction& phi, const Vec& x) {
  if (f.supercoercive()) return "f supercoercive";
  if (phi.bounded_below()) return "inf phi > -oo";
  const auto dual_dom = conjugate_domain(phi);
  if (f.dom_fstar().kind == DomainKind::full_space) return "int dom f* = R^n";
  if (std::isfinite(phi.conjugate_value(Vec::Zero(phi.dim())))) {
    return "0 in dom phi*, so int dom f* lies in int(dom f* + dom phi*)";
  }
  if (dual_dom) {
    try {
      const SumInterior si = sum_interior(f.dom_fstar(), *dual_dom);
      if (f.dom_f().contains_interior(x) && si.contains(f.gradient(x))) {
        return "grad f(x) in int(dom f* + dom phi*)";
      }
    } catch (const UnsupportedError&) {
    }
  }
  return {};
}

ProxResult bprox(const LegendreFunction& f, const ConvexFunction& phi, const PrimalVector& x,
                 const ProxOptions& opts) {
  require_dims(f, phi, x.dim());
  if (!f.dom_f().contains_interior(x.coords())) {
    throw DomainError("bprox " + pair_label(f, phi) + ": x is not in int dom f");
  }
  const auto cert = resolve(opts).certify(f, phi);
  if (!cert || !cert->cq_primal) {
    throw PreconditionError("bprox " + pair_label(f, phi) +
                            ": 0 in sri(dom f - dom phi) is not certified");
  }
  if (bprox_existence(f, phi, x.coords()).empty()) {
    throw PreconditionError("bprox " + pair_label(f, phi) +
                            ": none of the existence conditions holds at x");
  }
  return run_bprox(f, phi, x.coords(), opts);
}

DualProxResult bprox_conjugate(const LegendreFunction& f, const ConvexFunction& phi,
                               const DualVector& xstar, const ProxOptions& opts) {
  ProxResult r = bprox(f.conjugate(), phi.conjugate(), as_primal(xstar), opts);
  return DualProxResult{as_dual(r.point), r.inclusion_residual, std::move(r.solve)};
}

PrimalVector gen_project(const ConeSpec& cone, double p, const PrimalVector& x,
                         const ProxOptions& opts) {
  if (cone.dim() != x.dim()) throw UsageError("gen_project: dimension mismatch");
  const auto f = LegendreFunction::pnorm_energy(x.dim(), p);
  return bprox(f, ConvexFunction::indicator(cone), x, opts).point;
}

}  // namespace moreau
