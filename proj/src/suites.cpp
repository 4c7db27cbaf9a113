#include "moreau/suites.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Eigenvalues>

namespace moreau {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vec sample_admissible(const LegendreFunction& f, const ConvexFunction& phi, Rng& rng) {
  const Index n = f.dim();
  const SumInterior si = sum_interior(f.dom_f(), phi.domain());
  const bool f_full = f.dom_f().kind == DomainKind::full_space;
  const Vec g = rng.gaussian(n);
  if (f_full && si.full) return g;

  Vec lower = Vec::Constant(n, -kInf);
  if (!f_full) lower = f.dom_f().lower;
  if (!si.full) lower = lower.cwiseMax(si.lower);
  return lower + g.cwiseAbs() + Vec::Constant(n, 0.1);
}

std::vector<Pairing> theorem_pairings(Index n, Rng& rng) {
  const Mat b = rng.gaussian(n, n);
  const Mat m = b.transpose() * b / static_cast<double>(n) + 0.5 * Mat::Identity(n, n);
  const Vec c = 0.5 * rng.gaussian(n);
  const auto orthant = ConvexFunction::indicator(ConeSpec::nonneg_orthant(n));

  std::vector<Pairing> out;
  out.push_back({LegendreFunction::euclidean(n), ConvexFunction::l1(n, 1.0)});
  out.push_back({LegendreFunction::euclidean(n), orthant});
  out.push_back({LegendreFunction::quadratic_spd(0.5 * (m + m.transpose())), orthant});
  for (double p : {1.5, 3.0, 4.0}) out.push_back({LegendreFunction::pnorm_energy(n, p), orthant});
  out.push_back({LegendreFunction::pnorm_energy(n, 4.0), ConvexFunction::l1(n, 1.0)});
  out.push_back({LegendreFunction::shannon_entropy(n), ConvexFunction::linear(c)});
  out.push_back({LegendreFunction::shannon_entropy(n),
                 ConvexFunction::box(Vec::Constant(n, 0.5), Vec::Constant(n, 2.0))});
  return out;
}

std::vector<Pairing> cone_pairings(Index n) {
  std::vector<Pairing> out;
  for (double p : {1.5, 3.0, 4.0}) {
    out.push_back({LegendreFunction::pnorm_energy(n, p),
                   ConvexFunction::indicator(ConeSpec::nonneg_orthant(n))});
    if (n >= 2) {
      out.push_back({LegendreFunction::pnorm_energy(n, p),
                     ConvexFunction::indicator(ConeSpec::second_order(n))});
    }
  }
  return out;
}

std::vector<Scenario> theorem_scenarios(const std::vector<Index>& dims, int per_pairing,
                                        std::uint64_t seed) {
  return build_scenarios(dims, per_pairing, seed,
                         [](Index n, Rng& rng) { return theorem_pairings(n, rng); });
}

std::vector<Scenario> cone_scenarios(const std::vector<Index>& dims, int per_pairing,
                                     std::uint64_t seed) {
  return build_scenarios(dims, per_pairing, seed,
                         [](Index n, Rng&) { return cone_pairings(n); });
}

namespace {

ScenarioOutcome run_one(const Scenario& s, const ProxOptions& opts) {
  ScenarioOutcome out;
  try {
    out.report = decompose(s.pairing.f, s.pairing.phi, s.x, opts, s.seed);
  } catch (const std::exception& e) {
    out.error = e.what();
    out.report.geometry = s.pairing.f.label();
    out.report.phi = s.pairing.phi.label();
    out.report.seed = s.seed;
    out.report.x = s.x;
  }
  return out;
}

}  // namespace

std::vector<ScenarioOutcome> run_scenarios(const std::vector<Scenario>& scenarios,
                                           const ProxOptions& opts, Execution exec) {
  const auto count = static_cast<long long>(scenarios.size());
  std::vector<ScenarioOutcome> out(scenarios.size());
  if (exec == Execution::serial) {
    for (long long i = 0; i < count; ++i) out[i] = run_one(scenarios[i], opts);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) out[i] = run_one(scenarios[i], opts);
  return out;
}

SuiteReport theorem_suite(const std::vector<ScenarioOutcome>& outcomes,
                          const ToleranceProfile& tol) {
  SuiteReport out;
  out.suite = "theorem";
  for (const auto& o : outcomes) {
    out.add("scenario_error", o.error.empty() ? 0.0 : 1.0, 0.0);
    if (o.error.empty()) add_theorem_checks(out, o.report, tol);
  }
  return out;
}

SuiteReport cone_suite(const std::vector<ScenarioOutcome>& outcomes, const ToleranceProfile& tol) {
  SuiteReport out;
  out.suite = "cone";
  for (const auto& o : outcomes) {
    out.add("scenario_error", o.error.empty() ? 0.0 : 1.0, 0.0);
    if (!o.error.empty()) continue;
    const DecompositionReport& r = o.report;
    // p is the metric projection P_K x and dstar is Pi_{K-}(Jx); for the
    // l^p energy grad f* = J^{-1}.
    out.add("cone_reconstruction", r.residual_ii, tol.vector_tol * (1.0 + r.x.coords().norm()));
    out.add("cone_orthogonality", std::abs(r.p.coords().dot(r.dstar.coords())), tol.gap_tol);
    out.add("converged", r.converged ? 0.0 : 1.0, 0.0);
  }
  return out;
}

SuiteReport resolvent_suite(const std::vector<Scenario>& scenarios,
                            const std::vector<ScenarioOutcome>& outcomes,
                            const ToleranceProfile& tol) {
  if (scenarios.size() != outcomes.size()) throw UsageError("resolvent suite: size mismatch");
  SuiteReport out;
  out.suite = "resolvent";
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    out.add("scenario_error", outcomes[i].error.empty() ? 0.0 : 1.0, 0.0);
    if (!outcomes[i].error.empty()) continue;
    out.merge(verify_resolvent(scenarios[i].pairing.f, scenarios[i].pairing.phi,
                               outcomes[i].report, tol));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

namespace {

// The point of dom phi* when that domain is a singleton.
std::optional<Vec> singleton_point(const ConvexFunction& phi) {
  try {
    const ConvexFunction pc = phi.conjugate();
    if (pc.name() == "singleton") return pc.prox(Vec::Zero(pc.dim()), 1.0);
  } catch (const UnsupportedError&) {
  }
  return std::nullopt;
}

GridBox centred_box(const Vec& target) {
  const double r = 2.0 * target.cwiseAbs().maxCoeff() + 1.0;
  const Index n = target.size();
  return GridBox{Vec::Constant(n, -r), Vec::Constant(n, r)};
}

void compare(SuiteReport& out, const std::string& name,
             const std::function<double(const Vec&)>& objective, const Vec& solved,
             int resolution, Execution exec) {
  try {
    const GridResult g = brute_force_min(objective, centred_box(solved), resolution, exec);
    out.add(name, (g.point - solved).cwiseAbs().maxCoeff(), g.refined_spacing.maxCoeff());
  } catch (const DomainError&) {
    out.add(name, kInf, 0.0);
  }
}

void compare_conjugate(SuiteReport& out, const std::string& name,
                       const std::function<double(const Vec&)>& g, const Vec& xstar,
                       const Vec& argmax, double closed, int resolution, Execution exec) {
  if (!std::isfinite(closed)) return;  // unbounded: the grid cannot see it
  const ConjugateEstimate est = numeric_conjugate(g, xstar, centred_box(argmax), resolution, exec);
  out.add(name, std::abs(est.value - closed), est.refined_spacing.maxCoeff());
}

}  // namespace

SuiteReport oracle_suite(const std::vector<Scenario>& scenarios,
                         const std::vector<ScenarioOutcome>& outcomes, const ProxOptions& opts,
                         int resolution, Execution exec) {
  if (scenarios.size() != outcomes.size()) throw UsageError("oracle suite: size mismatch");
  SuiteReport out;
  out.suite = "oracle";
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& s = scenarios[i];
    const ScenarioOutcome& o = outcomes[i];
    const LegendreFunction& f = s.pairing.f;
    const ConvexFunction& phi = s.pairing.phi;
    if (s.x.dim() > 2) continue;
    out.add("scenario_error", o.error.empty() ? 0.0 : 1.0, 0.0);
    if (!o.error.empty()) continue;
    const Vec x = s.x.coords();

    // aprox: phi(y) + f(x - y).
    compare(out, "oracle_aprox",
            [&](const Vec& y) {
              const double a = phi.value(y);
              return std::isfinite(a) ? a + f.value(Vec(x - y)) : kInf;
            },
            o.report.p.coords(), resolution, exec);

    // Dual-side bprox: phi*(u) + D_{f*}(u, grad f(x)).
    const LegendreFunction fc = f.conjugate();
    const Vec gx = f.gradient(x);
    if (const auto only = singleton_point(phi)) {
      // dom phi* is one point, which no grid hits: the argmin is forced.
      const Vec& d = o.report.dstar.coords();
      out.add("oracle_bprox_dual", (*only - d).cwiseAbs().maxCoeff(),
              kFeasibilityTol * (1.0 + only->cwiseAbs().maxCoeff()));
    } else {
      compare(out, "oracle_bprox_dual",
              [&](const Vec& u) {
                const double a = phi.conjugate_value(u);
                return std::isfinite(a) ? a + bregman(fc, u, gx) : kInf;
              },
              o.report.dstar.coords(), resolution, exec);
    }

    // Primal bprox whenever its hypotheses hold.
    const auto cert = (opts.ledger ? *opts.ledger : PairingLedger::standard()).certify(f, phi);
    if (cert && cert->cq_primal && !bprox_existence(f, phi, x).empty()) {
      try {
        const ProxResult b = bprox(f, phi, s.x, opts);
        compare(out, "oracle_bprox",
                [&](const Vec& y) {
                  const double a = phi.value(y);
                  return std::isfinite(a) ? a + bregman(f, y, x) : kInf;
                },
                b.point.coords(), resolution, exec);
      } catch (const Error&) {
        out.add("oracle_bprox", kInf, 0.0);
      }
    }

    // Conjugates: f* at grad f(x) (argmax x), phi* at grad f(x - p)
    // (argmax p).
    compare_conjugate(out, "oracle_conj_f", [&](const Vec& y) { return f.value(y); }, gx, x,
                      f.conj_value(gx), resolution, exec);
    const Vec& dp = o.report.dstar_primal.coords();
    compare_conjugate(out, "oracle_conj_phi", [&](const Vec& y) { return phi.value(y); }, dp,
                      o.report.p.coords(), phi.conjugate_value(dp), resolution, exec);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gradients

namespace {

Vec interior_sample(const LegendreFunction& f, Rng& rng) {
  const Index n = f.dim();
  const Vec g = rng.gaussian(n);
  switch (f.kind()) {
    case LegendreFunction::Kind::shannon_entropy:
      return f.dom_f().lower + g.cwiseAbs() + Vec::Constant(n, 0.1);
    case LegendreFunction::Kind::pnorm_energy: {
      // Keep coordinates away from 0, where the p-norm energy is only C^1
      // for p < 2 and central differences lose their second-order accuracy.
      Vec x(n);
      for (Index i = 0; i < n; ++i) x[i] = std::copysign(0.05 + std::abs(g[i]), g[i]);
      return x;
    }
    default:
      return g;
  }
}

double fd_error(const std::function<double(const Vec&)>& value, const Vec& grad, const Vec& x,
                double h) {
  double err = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    const double fd = (value(a) - value(b)) / (2.0 * h);
    err = std::max(err, std::abs(fd - grad[i]));
  }
  return err;
}

}  // namespace

SuiteReport gradient_suite(const std::vector<LegendreFunction>& geometries, int count,
                           std::uint64_t seed, const ToleranceProfile& tol) {
  tol.validate();
  SuiteReport out;
  out.suite = "gradient";
  out.seed = seed;
  Rng rng(seed);
  for (const LegendreFunction& f : geometries) {
    for (int k = 0; k < count; ++k) {
      const Vec x = interior_sample(f, rng);
      out.add("grad_" + f.name(),
              fd_error([&](const Vec& y) { return f.value(y); }, f.gradient(x), x, tol.fd_step),
              1e-5);
      // The conjugate gets its own interior sample: at grad f(x) the p = 4
      // energy puts dual coordinates near |x_i|^3, inside the region where
      // the 4/3 energy's central differences lose accuracy.
      const Vec u = interior_sample(f.conjugate(), rng);
      out.add("grad_conj_" + f.name(),
              fd_error([&](const Vec& y) { return f.conj_value(y); }, f.conj_gradient(u), u,
                       tol.fd_step),
              1e-5);
      const Vec s = f.gradient(x);
      out.add("roundtrip_" + f.name(), (f.conj_gradient(s) - x).norm(),
              tol.vector_tol * (1.0 + x.norm()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Frames

SuiteReport frame_suite(const FrameSystem& fs, const std::vector<ConvexFunction>& phis, int count,
                        std::uint64_t seed, const ProxOptions& opts) {
  const ToleranceProfile& tol = opts.tol;
  SuiteReport out;
  out.suite = "frame";
  out.seed = seed;
  Rng rng(seed);
  const Index n = fs.dim();
  const double s_scale = 1.0 + fs.s.cwiseAbs().maxCoeff();

  for (Index j = 0; j < n; ++j) {
    const Vec e = Vec::Unit(n, j);
    out.add("frame_operator", (fs.s * e - fs.apply(e)).cwiseAbs().maxCoeff(), 1e-12 * s_scale);
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(fs.s);
  const auto energy = [&](const Vec& v) { return (fs.vectors.transpose() * v).squaredNorm(); };
  out.add("frame_bound_alpha_attained", std::abs(energy(eig.eigenvectors().col(0)) - fs.alpha),
          1e-10 * fs.beta);
  out.add("frame_bound_beta_attained", std::abs(energy(eig.eigenvectors().col(n - 1)) - fs.beta),
          1e-10 * fs.beta);

  const LegendreFunction f = frame_legendre(fs);
  const bool orthonormal =
      (fs.s - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12 && fs.size() == n;
  for (int k = 0; k < count; ++k) {
    const Vec x = rng.gaussian(n);
    const double e = energy(x);
    const double xx = x.squaredNorm();
    out.add("frame_bounds", std::max({fs.alpha * xx - e, e - fs.beta * xx, 0.0}),
            1e-12 * fs.beta * (1.0 + xx));
    out.add("frame_reconstruction", (x - fs.reconstruct(x)).norm(),
            tol.vector_tol * (1.0 + x.norm()));
    const DualVector xs(rng.gaussian(n));
    const double closed = f.conj_value(xs.coords());
    out.add("frame_fstar_formula", std::abs(closed - frame_conjugate_sum(fs, xs)),
            1e-10 * (1.0 + std::abs(closed)));

    for (const ConvexFunction& phi : phis) {
      try {
        const FrameDecomposition d = frame_decompose(fs, phi, PrimalVector(x), opts);
        out.add("frame_decomposition", d.reconstruction_residual, tol.vector_tol);
        out.add("frame_dual_synthesis", d.synthesis_residual,
                tol.vector_tol * (1.0 + d.b.coords().norm()));
        out.add("converged", d.report.converged ? 0.0 : 1.0, 0.0);
        if (orthonormal) {
          const Vec pa = phi.prox(x, 1.0);
          const Vec pb = phi.conjugate().prox(x, 1.0);
          out.add("frame_orthonormal_prox", (d.a.coords() - pa).norm(), 1e-8 * (1.0 + x.norm()));
          out.add("frame_orthonormal_prox_conj", (d.synthesis.coords() - pb).norm(),
                  1e-8 * (1.0 + x.norm()));
        }
      } catch (const std::exception&) {
        out.add("scenario_error", 1.0, 0.0);
      }
    }
  }
  return out;
}

}  // namespace moreau
