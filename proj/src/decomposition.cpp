#include "moreau/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace moreau {

void SuiteReport::add(std::string name, double value, double bound) {
  // NaN never passes.
  const bool ok = value <= bound;
  checks.push_back(Check{std::move(name), value, bound, ok});
}

void SuiteReport::merge(const SuiteReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::size_t SuiteReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.passed; }));
}

std::size_t SuiteReport::failed() const { return checks.size() - passed(); }

double SuiteReport::max_value(const std::string& name) const {
  double m = -kInf;
  for (const auto& c : checks) {
    if (c.name == name) m = std::max(m, std::isnan(c.value) ? kInf : c.value);
  }
  return m;
}

namespace {

// |<u, v> - phi(u) - phi*(v)|, +inf when either value is +inf.
double pairing_residual(const ConvexFunction& phi, const Vec& u, const Vec& v) {
  const double a = phi.value(u);
  const double b = phi.conjugate_value(v);
  if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
  return std::abs(u.dot(v) - a - b);
}

}  // namespace

DecompositionReport decompose(const LegendreFunction& f, const ConvexFunction& phi,
                              const PrimalVector& x, const ProxOptions& opts, std::uint64_t seed) {
  if (f.dim() != x.dim() || phi.dim() != x.dim()) {
    throw UsageError("decompose: dimension mismatch");
  }
  const PairingLedger& ledger = opts.ledger ? *opts.ledger : PairingLedger::standard();
  const auto cert = ledger.certify(f, phi);
  if (!cert || !cert->cq_dual) {
    throw PreconditionError("decompose (" + f.label() + ", " + phi.label() +
                            "): 0 in sri(dom f* - dom phi*) is not certified");
  }
  const Vec& xv = x.coords();
  if (!f.dom_f().contains_interior(xv)) {
    throw DomainError("decompose: x is not in int dom f for " + f.label());
  }

  DecompositionReport r;
  r.geometry = f.label();
  r.phi = phi.label();
  r.seed = seed;
  r.x = x;
  r.cq_primal = cert->cq_primal;
  r.cq_dual = cert->cq_dual;

  const ProxResult a = aprox(f, phi, x, opts);
  ProxOptions dual_opts = opts;
  dual_opts.init.reset();
  const Vec gx = f.gradient(xv);
  const DualProxResult b = bprox_conjugate(f, phi, DualVector(gx), dual_opts);

  const Vec& p = a.point.coords();
  const Vec& d = b.point.coords();
  const Vec z = xv - p;
  const Vec d_primal = f.gradient(z);
  const Vec recon = p + f.conj_gradient(d);

  r.p = a.point;
  r.dstar = b.point;
  r.dstar_primal = DualVector(d_primal);
  r.reconstruction = PrimalVector(recon);

  r.f_value = f.value(xv);
  r.infconv_value = phi.value(p) + f.value(z);
  r.diamond_value = phi.conjugate_value(d) + bregman(f.conjugate(), d, gx);
  r.residual_i = std::abs(r.f_value - r.infconv_value - r.diamond_value);
  if (std::isnan(r.residual_i)) r.residual_i = kInf;
  r.residual_ii = (xv - recon).norm();
  r.residual_iii = pairing_residual(phi, p, d);
  r.residual_iv = pairing_residual(phi, p, d_primal);
  r.dstar_gap = (d - d_primal).norm();
  r.aprox_inclusion = a.inclusion_residual;
  r.bprox_inclusion = b.inclusion_residual;
  r.converged = a.solve.converged && b.solve.converged;
  r.iterations = a.solve.iterations + b.solve.iterations;
  r.newton_steps = a.solve.newton_steps + b.solve.newton_steps;
  return r;
}

void add_theorem_checks(SuiteReport& out, const DecompositionReport& r,
                        const ToleranceProfile& tol) {
  const double xn = r.x.coords().norm();
  out.add("residual_i", r.residual_i, tol.value_tol * (1.0 + std::abs(r.f_value)));
  out.add("residual_ii", r.residual_ii, tol.vector_tol * (1.0 + xn));
  out.add("residual_iii", r.residual_iii, tol.gap_tol);
  out.add("residual_iv", r.residual_iv, tol.gap_tol);
  out.add("dstar_consistency", r.dstar_gap,
          tol.vector_tol * (1.0 + r.dstar_primal.coords().norm()));
  out.add("converged", r.converged ? 0.0 : 1.0, 0.0);
}

// ---------------------------------------------------------------------------
// Hilbert special cases

namespace {

void check_cone(SuiteReport& out, const std::string& tag, const ConeSpec& k, const Vec& x,
                const ToleranceProfile& tol) {
  const Vec pk = k.project(x);
  const Vec pp = polar_project(k, PrimalVector(x)).coords();
  const double dk = (x - pk).norm();
  const double dp = (x - pp).norm();
  const double xx = x.squaredNorm();
  out.add(tag + "_pythagoras", std::abs(xx - dk * dk - dp * dp), tol.value_tol * (1.0 + xx));
  out.add(tag + "_sum", (x - pk - pp).norm(), tol.vector_tol * (1.0 + x.norm()));
  out.add(tag + "_orthogonality", std::abs(pk.dot(pp)), tol.gap_tol);
}

std::vector<ConvexFunction> moreau_catalog(Index n, Rng& rng) {
  const Mat b = rng.gaussian(n, n);
  std::vector<ConvexFunction> out;
  out.push_back(ConvexFunction::zero(n));
  out.push_back(ConvexFunction::linear(rng.gaussian(n)));
  out.push_back(ConvexFunction::l1(n, 1.0));
  out.push_back(ConvexFunction::box(Vec::Constant(n, -1.0), Vec::Constant(n, 2.0)));
  out.push_back(ConvexFunction::box_support(Vec::Constant(n, -0.5), Vec::Constant(n, 1.5)));
  out.push_back(ConvexFunction::indicator(ConeSpec::nonneg_orthant(n)));
  if (n >= 2) out.push_back(ConvexFunction::indicator(ConeSpec::second_order(n)));
  out.push_back(ConvexFunction::quadratic(Mat(b.transpose() * b / static_cast<double>(n) +
                                              0.5 * Mat::Identity(n, n)),
                                          rng.gaussian(n)));
  return out;
}

}  // namespace

SuiteReport verify_hilbert_special_cases(std::uint64_t seed, const ToleranceProfile& tol,
                                         int count, std::vector<Index> dims) {
  tol.validate();
  if (count < 1 || dims.empty()) throw UsageError("hilbert suite: need count >= 1 and dims");
  SuiteReport out;
  out.suite = "hilbert";
  out.seed = seed;
  Rng rng(seed);

  for (int i = 0; i < count; ++i) {
    const Index n = dims[static_cast<std::size_t>(i) % dims.size()];
    if (n < 1) throw UsageError("hilbert suite: dimension must be >= 1");
    const Vec x = 2.0 * rng.gaussian(n);
    const double xx = x.squaredNorm();

    // Orthogonal decomposition onto V and its complement.
    const Index k = std::max<Index>(1, n / 2);
    const ConeSpec v = ConeSpec::subspace(rng.gaussian(n, k));
    const ConeSpec w = v.polar();
    const Vec pv = v.project(x);
    const Vec pw = w.project(x);
    const double dv = (x - pv).norm();
    const double dw = (x - pw).norm();
    out.add("subspace_pythagoras", std::abs(xx - dv * dv - dw * dw), tol.value_tol * (1.0 + xx));
    out.add("subspace_sum", (x - pv - pw).norm(), tol.vector_tol * (1.0 + x.norm()));
    out.add("subspace_orthogonality", std::abs(pv.dot(pw)), tol.gap_tol);

    // Conic decomposition.
    check_cone(out, "orthant", ConeSpec::nonneg_orthant(n), x, tol);
    if (n >= 2) check_cone(out, "soc", ConeSpec::second_order(n), x, tol);
    check_cone(out, "halfspace", ConeSpec::halfspace(rng.gaussian(n)), x, tol);

    // Moreau decomposition for catalog entries.
    for (const ConvexFunction& phi : moreau_catalog(n, rng)) {
      const ConvexFunction conj = phi.conjugate();
      const Vec a = phi.prox(x, 1.0);
      const Vec b = conj.prox(x, 1.0);
      const double env_a = phi.value(a) + 0.5 * (x - a).squaredNorm();
      const double env_b = conj.value(b) + 0.5 * (x - b).squaredNorm();
      out.add("moreau_energy", std::abs(0.5 * xx - env_a - env_b), tol.value_tol * (1.0 + 0.5 * xx));
      out.add("moreau_sum", (x - a - b).norm(), tol.vector_tol * (1.0 + x.norm()));
      out.add("moreau_pairing", pairing_residual(phi, a, b), tol.gap_tol);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolvent form

SuiteReport verify_resolvent(const LegendreFunction& f, const ConvexFunction& phi,
                             const DecompositionReport& r, const ToleranceProfile& tol) {
  SuiteReport out;
  out.suite = "resolvent";
  out.seed = r.seed;
  const Vec& x = r.x.coords();
  const Vec& p = r.p.coords();
  // grad f(x - p) in A p.
  out.add("resolvent_first", fenchel_young_gap(phi, p, r.dstar_primal.coords(), tol.value_tol),
          tol.gap_tol);
  // p in A^{-1} dstar, i.e. dstar in A p.
  out.add("resolvent_second", fenchel_young_gap(phi, p, r.dstar.coords(), tol.value_tol),
          tol.gap_tol);
  out.add("resolvent_reconstruction", r.residual_ii, tol.vector_tol * (1.0 + x.norm()));

  if (f.kind() == LegendreFunction::Kind::euclidean) {
    try {
      const Vec a = phi.prox(x, 1.0);
      const Vec b = phi.conjugate().prox(x, 1.0);
      out.add("resolvent_euclid_sum", (x - a - b).norm(), 1e-8 * (1.0 + x.norm()));
    } catch (const UnsupportedError&) {
      // phi* has no closed-form prox (singular quadratic): nothing to compare.
    }
  }
  return out;
}

SuiteReport verify_resolvent(const LegendreFunction& f, const ConvexFunction& phi,
                             const PrimalVector& x, const ProxOptions& opts) {
  return verify_resolvent(f, phi, decompose(f, phi, x, opts), opts.tol);
}

}  // namespace moreau
