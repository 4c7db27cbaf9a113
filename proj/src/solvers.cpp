#include "moreau/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moreau {

namespace {

constexpr double kRoundoff = 4.0 * std::numeric_limits<double>::epsilon();

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

struct Iterate {
  Vec y;
  double h = kInf;
  Vec g;
  double total = kInf;
};

}  // namespace

SolveResult minimize_composite(const CompositeProblem& prob, const ToleranceProfile& tol,
                               const SolverOptions& opts) {
  tol.validate();
  if (opts.max_iter < 1) throw UsageError("minimize_composite: max_iter must be >= 1");
  if (!prob.smooth_value || !prob.smooth_grad || !prob.interior_guard) {
    throw UsageError("minimize_composite: smooth part and interior guard are required");
  }
  const ConvexFunction& phi = prob.nonsmooth;
  const Index n = phi.dim();
  if (prob.init.size() != n) throw UsageError("minimize_composite: init dimension mismatch");

  auto usable = [&](const Vec& y) {
    return y.allFinite() && prob.interior_guard(y) && std::isfinite(phi.value(y)) &&
           std::isfinite(prob.smooth_value(y));
  };
  auto make_iterate = [&](Vec y) {
    Iterate it;
    it.h = prob.smooth_value(y);
    it.g = prob.smooth_grad(y);
    it.total = it.h + phi.value(y);
    it.y = std::move(y);
    return it;
  };

  Vec start = prob.init;
  if (!usable(start)) {
    // Feasibility restoration: one prox step onto dom phi.
    start = phi.prox(prob.init, 1.0);
    if (!usable(start)) {
      throw InfeasibleStartError("minimize_composite: no interior-feasible start found");
    }
  }

  const bool use_newton = opts.newton && static_cast<bool>(prob.smooth_hessian);
  const Mat id = Mat::Identity(n, n);
  auto certificate = [&](const Iterate& it) {
    return fenchel_young_gap(phi, it.y, Vec(-it.g), tol.value_tol);
  };

  Iterate cur = make_iterate(std::move(start));
  SolveResult result;
  if (opts.record_trace) result.trace.push_back(cur.total);

  double t = opts.initial_step;
  int still = 0;
  int flat = 0;
  int it_count = 0;
  bool converged = false;
  double gap = certificate(cur);

  for (int it = 1; it <= opts.max_iter; ++it) {
    it_count = it;
    t = std::min(t / opts.backtrack, opts.max_step);

    // Forward-backward step with sufficient-decrease backtracking.
    Vec step;
    Vec cand;
    double h_cand = kInf;
    bool found = false;
    for (int k = 0; k < 200; ++k) {
      step = phi.prox_step(cur.y, Vec(-t * cur.g), t);
      cand = cur.y + step;
      if (prob.interior_guard(cand)) {
        h_cand = prob.smooth_value(cand);
        const double bound = cur.h + cur.g.dot(step) + step.squaredNorm() / (2.0 * t) +
                             kRoundoff * (1.0 + std::abs(cur.h));
        // The value test alone stops resolving once the decrease drops below
        // roundoff; the curvature test keeps t under the local 1/L there.
        if (std::isfinite(h_cand) && h_cand <= bound) {
          const Vec g_cand = prob.smooth_grad(cand);
          if (t * (g_cand - cur.g).dot(step) <= step.squaredNorm() || step.squaredNorm() == 0.0) {
            found = true;
            break;
          }
        }
      }
      t *= opts.backtrack;
    }
    if (!found) break;

    Iterate next;
    bool took_newton = false;
    if (use_newton) {
      // Semismooth Newton on R(y) = -prox_step(y, -t grad h(y), t):
      //   (I - P (I - t H)) d = -R.
      const Mat jac_prox = phi.prox_jacobian(Vec(cur.y - t * cur.g), t);
      const Mat hess = prob.smooth_hessian(cur.y);
      const Mat system = id - jac_prox * (id - t * hess);
      const Vec d = system.partialPivLu().solve(step);
      const double r_norm = step.norm();
      if (d.allFinite() && r_norm > 0.0) {
        for (double s = 1.0; s >= 0.124; s *= 0.5) {
          const Vec yn = cur.y + s * d;
          if (!prob.interior_guard(yn)) continue;
          const double hn = prob.smooth_value(yn);
          if (!std::isfinite(hn)) continue;
          const Vec gn = prob.smooth_grad(yn);
          const Vec corr = phi.prox_step(yn, Vec(-t * gn), t);
          if (!(corr.norm() <= 0.9 * r_norm)) continue;
          const Vec yc = yn + corr;
          if (!prob.interior_guard(yc)) continue;
          Iterate trial = make_iterate(yc);
          if (!std::isfinite(trial.total)) continue;
          if (trial.total <= cur.total + 1e-12 * (1.0 + std::abs(cur.total))) {
            next = std::move(trial);
            took_newton = true;
            break;
          }
        }
      }
    }
    if (!took_newton) next = make_iterate(cand);
    if (took_newton) ++result.newton_steps;

    const double moved = inf_norm(next.y - cur.y);
    const double prev_total = cur.total;
    cur = std::move(next);
    if (opts.record_trace) result.trace.push_back(cur.total);
    gap = certificate(cur);

    const double scale = 1.0 + inf_norm(cur.y);
    if (moved <= opts.step_tol * scale) {
      ++still;
    } else {
      still = 0;
    }
    if (gap <= tol.gap_tol && moved <= opts.step_tol * scale) {
      converged = true;
      break;
    }
    if (still >= 5) break;
    if (!use_newton) {
      // First-order mode: stop on a flat objective.
      const double rel = (prev_total - cur.total) / (1.0 + std::abs(prev_total));
      flat = rel < tol.value_tol ? flat + 1 : 0;
      if (flat >= 5 && gap <= tol.gap_tol) {
        converged = true;
        break;
      }
    }
  }

  result.minimizer = cur.y;
  result.objective = cur.total;
  result.iterations = it_count;
  result.gap_certificate = gap;
  result.converged = converged || gap <= tol.gap_tol;
  return result;
}

// ---------------------------------------------------------------------------
// Grid oracles

namespace {

struct Best {
  double value = kInf;
  long long index = std::numeric_limits<long long>::max();

  bool better_than(const Best& other) const {
    return value < other.value || (value == other.value && index < other.index);
  }
};

// Tensor grid given per-axis coordinate lists; the first axis is the most
// significant digit of the flat index, so flat order is lexicographic.
Best grid_argmin(const std::function<double(const Vec&)>& objective,
                 const std::vector<std::vector<double>>& axes, Execution exec) {
  const Index n = static_cast<Index>(axes.size());
  long long total = 1;
  for (const auto& a : axes) total *= static_cast<long long>(a.size());

  auto point_at = [&](long long flat, Vec& p) {
    for (Index j = n - 1; j >= 0; --j) {
      const auto m = static_cast<long long>(axes[j].size());
      p[j] = axes[j][static_cast<std::size_t>(flat % m)];
      flat /= m;
    }
  };
  auto eval = [&](long long flat, Vec& p, Best& best) {
    point_at(flat, p);
    double v = objective(p);
    if (std::isnan(v)) v = kInf;
    const Best cand{v, flat};
    if (cand.value < kInf && cand.better_than(best)) best = cand;
  };

  Best best;
  if (exec == Execution::serial) {
    Vec p(n);
    for (long long k = 0; k < total; ++k) eval(k, p, best);
    return best;
  }
#pragma omp parallel
  {
    Best local;
    Vec p(n);
#pragma omp for schedule(static) nowait
    for (long long k = 0; k < total; ++k) eval(k, p, local);
#pragma omp critical(moreau_grid_argmin)
    {
      if (local.better_than(best)) best = local;
    }
  }
  return best;
}

Vec decode(long long flat, const std::vector<std::vector<double>>& axes) {
  const Index n = static_cast<Index>(axes.size());
  Vec p(n);
  for (Index j = n - 1; j >= 0; --j) {
    const auto m = static_cast<long long>(axes[j].size());
    p[j] = axes[j][static_cast<std::size_t>(flat % m)];
    flat /= m;
  }
  return p;
}

void check_grid(const GridBox& box, int resolution, Index max_dim) {
  const Index n = box.lo.size();
  if (n < 1 || n > max_dim || box.hi.size() != n) {
    throw UsageError("grid oracle: dimension must be between 1 and " + std::to_string(max_dim));
  }
  if (!(box.lo.array() < box.hi.array()).all() || !box.lo.allFinite() || !box.hi.allFinite()) {
    throw UsageError("grid oracle: need finite lo < hi");
  }
  if (resolution < 2 || resolution > 401) {
    throw UsageError("grid oracle: resolution must be in [2, 401]");
  }
}

GridResult refined_argmin(const std::function<double(const Vec&)>& objective, const GridBox& box,
                          int resolution, Execution exec) {
  const Index n = box.lo.size();
  const Vec h = (box.hi - box.lo) / static_cast<double>(resolution - 1);

  std::vector<std::vector<double>> coarse(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    auto& a = coarse[static_cast<std::size_t>(j)];
    a.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
      a.push_back(i == resolution - 1 ? box.hi[j] : box.lo[j] + i * h[j]);
    }
  }
  const Best b0 = grid_argmin(objective, coarse, exec);
  if (!(b0.value < kInf)) throw DomainError("grid oracle: every grid point is infeasible");
  const Vec incumbent = decode(b0.index, coarse);

  std::vector<std::vector<double>> fine(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    auto& a = fine[static_cast<std::size_t>(j)];
    const double step = h[j] / 10.0;
    for (int k = -10; k <= 10; ++k) {
      const double c = incumbent[j] + k * step;
      if (c < box.lo[j] - 1e-12 * h[j] || c > box.hi[j] + 1e-12 * h[j]) continue;
      a.push_back(std::clamp(c, box.lo[j], box.hi[j]));
    }
  }
  const Best b1 = grid_argmin(objective, fine, exec);

  GridResult out;
  if (b1.value <= b0.value) {
    out.point = decode(b1.index, fine);
    out.value = b1.value;
  } else {
    out.point = incumbent;
    out.value = b0.value;
  }
  out.refined_spacing = h / 10.0;
  for (Index j = 0; j < n; ++j) {
    const double edge = 1e-12 * (box.hi[j] - box.lo[j]);
    if (out.point[j] <= box.lo[j] + edge || out.point[j] >= box.hi[j] - edge) out.on_boundary = true;
  }
  return out;
}

}  // namespace

GridResult brute_force_min(const std::function<double(const Vec&)>& objective, const GridBox& box,
                           int resolution, Execution exec) {
  check_grid(box, resolution, 3);
  return refined_argmin(objective, box, resolution, exec);
}

ConjugateEstimate numeric_conjugate(const std::function<double(const Vec&)>& g, const Vec& xstar,
                                    const GridBox& box, int resolution, Execution exec) {
  check_grid(box, resolution, 2);
  if (xstar.size() != box.lo.size()) throw UsageError("numeric_conjugate: dimension mismatch");
  const auto negated = [&](const Vec& x) {
    const double v = g(x);
    if (!std::isfinite(v)) return kInf;
    return v - x.dot(xstar);
  };
  const GridResult r = refined_argmin(negated, box, resolution, exec);
  ConjugateEstimate out;
  out.value = -r.value;
  out.argmax = r.point;
  out.boundary_warning = r.on_boundary;
  out.refined_spacing = r.refined_spacing;
  return out;
}

}  // namespace moreau
