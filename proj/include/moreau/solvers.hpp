#pragma once

// Composite minimization h + phi (h smooth on an open domain, phi in the
// convex catalog) and brute-force grid oracles for n <= 3.

#include <functional>
#include <vector>

#include "moreau/convex.hpp"
#include "moreau/space.hpp"

namespace moreau {

/// Serial loops are the reference; parallel ones must reproduce them bit for
/// bit.
enum class Execution { serial, parallel };

struct CompositeProblem {
  std::function<double(const Vec&)> smooth_value;
  std::function<Vec(const Vec&)> smooth_grad;
  /// Optional. When present the solver adds semismooth Newton steps on the
  /// prox-gradient fixed-point residual.
  std::function<Mat(const Vec&)> smooth_hessian;
  ConvexFunction nonsmooth;
  /// True when the point lies in the open domain of the smooth part.
  std::function<bool(const Vec&)> interior_guard;
  Vec init;
};

struct SolverOptions {
  int max_iter = 20000;
  double initial_step = 1.0;
  double backtrack = 0.5;
  double max_step = 1e3;
  bool newton = true;
  /// Iterate-change threshold, relative to 1 + |y|_inf.
  double step_tol = 1e-14;
  bool record_trace = false;
};

struct SolveResult {
  Vec minimizer;
  double objective = kInf;
  int iterations = 0;
  int newton_steps = 0;
  /// Fenchel-Young gap of -grad h(y) in d phi(y).
  double gap_certificate = kInf;
  bool converged = false;
  /// Objective after every accepted iteration (record_trace only).
  std::vector<double> trace;
};

/// Proximal gradient with backtracking; a trial point outside the smooth
/// domain halves the step. Stops once the certificate is below gap_tol and
/// the iterate has stopped moving, when the iterate stalls, or at max_iter.
/// Throws InfeasibleStartError when neither init nor prox(init) is usable.
SolveResult minimize_composite(const CompositeProblem& prob, const ToleranceProfile& tol,
                               const SolverOptions& opts = {});

struct GridBox {
  Vec lo;
  Vec hi;
};

struct GridResult {
  Vec point;
  double value = kInf;
  /// Spacing of the refinement grid per coordinate; the documented accuracy
  /// is half of it.
  Vec refined_spacing;
  /// Some coordinate of `point` sits on the box boundary.
  bool on_boundary = false;
};

/// Grid argmin over the box (lowest lexicographic index wins ties), then one
/// pass at 10x finer spacing in a +-1 coarse cell window around the
/// incumbent. n <= 3, 2 <= resolution <= 401. Throws DomainError when every
/// grid point is infeasible.
GridResult brute_force_min(const std::function<double(const Vec&)>& objective, const GridBox& box,
                           int resolution, Execution exec = Execution::parallel);

struct ConjugateEstimate {
  double value = -kInf;
  Vec argmax;
  /// The maximizer sits on the box boundary: the box is likely too small.
  bool boundary_warning = false;
  Vec refined_spacing;
};

/// Grid estimate of sup_x <x, x*> - g(x) over the box; n <= 2.
ConjugateEstimate numeric_conjugate(const std::function<double(const Vec&)>& g, const Vec& xstar,
                                    const GridBox& box, int resolution,
                                    Execution exec = Execution::parallel);

}  // namespace moreau
