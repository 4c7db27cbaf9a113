#include <doctest.h>

#include <cmath>

#include "moreau/legendre.hpp"
#include "moreau/solvers.hpp"

using namespace moreau;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

CompositeProblem shifted_quadratic(const Vec& target, const ConvexFunction& phi, const Vec& init) {
  CompositeProblem prob{
      [target](const Vec& y) { return 0.5 * (y - target).squaredNorm(); },
      [target](const Vec& y) { return Vec(y - target); },
      {},
      phi,
      [](const Vec&) { return true; },
      init};
  return prob;
}

// f_x(y) = f(y) - <y, grad f(x)> for the entropy.
CompositeProblem entropy_fx(const Vec& x, const ConvexFunction& phi) {
  const auto f = LegendreFunction::shannon_entropy(x.size());
  const Vec gx = f.gradient(x);
  CompositeProblem prob{[f, gx](const Vec& y) { return f.value(y) - y.dot(gx); },
                        [f, gx](const Vec& y) { return Vec(f.gradient(y) - gx); },
                        [f](const Vec& y) { return f.hessian(y); },
                        phi,
                        [](const Vec& y) { return (y.array() > 0).all(); },
                        Vec::Constant(x.size(), 1.0)};
  return prob;
}

}  // namespace

TEST_CASE("minimize_composite examples") {
  const ToleranceProfile tol;
  const auto r = minimize_composite(
      shifted_quadratic(v2(2, -0.5), ConvexFunction::l1(2, 1.0), Vec::Zero(2)), tol);
  CHECK(r.converged);
  CHECK(r.gap_certificate <= 1e-6);
  CHECK((r.minimizer - v2(1, 0)).norm() <= 1e-10);

  const Vec x = v2(0.2, 5.0);
  const auto e = minimize_composite(entropy_fx(x, ConvexFunction::zero(2)), tol);
  CHECK(e.converged);
  CHECK((e.minimizer - x).norm() <= 1e-8);

  const auto c = minimize_composite(
      shifted_quadratic(v2(1, -2), ConvexFunction::indicator(ConeSpec::nonneg_orthant(2)),
                        Vec::Zero(2)),
      tol);
  CHECK(c.converged);
  CHECK((c.minimizer - v2(1, 0)).norm() <= 1e-12);
}

TEST_CASE("first-order path alone reaches the same points") {
  ToleranceProfile tol;
  SolverOptions opts;
  opts.newton = false;
  const auto r = minimize_composite(
      shifted_quadratic(v2(2, -0.5), ConvexFunction::l1(2, 1.0), Vec::Zero(2)), tol, opts);
  CHECK(r.converged);
  CHECK(r.newton_steps == 0);
  CHECK((r.minimizer - v2(1, 0)).norm() <= 1e-8);

  // entropy with a linear term: log y = log x - c
  const Vec x = v2(1.0, 1.0), c = v2(1.0, 0.0);
  const auto e = minimize_composite(entropy_fx(x, ConvexFunction::linear(c)), tol, opts);
  CHECK(e.converged);
  CHECK(std::abs(e.minimizer[0] - std::exp(-1.0)) <= 1e-6);
  CHECK(std::abs(e.minimizer[1] - 1.0) <= 1e-6);
}

TEST_CASE("accepted objectives are nonincreasing") {
  const Vec x = v2(3.0, 0.1);
  for (bool newton : {false, true}) {
    SolverOptions opts;
    opts.newton = newton;
    opts.record_trace = true;
    const auto r = minimize_composite(
        entropy_fx(x, ConvexFunction::box(v2(0.5, 0.5), v2(2.0, 2.0))), {}, opts);
    REQUIRE(r.trace.size() >= 2);
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      CHECK(r.trace[k] <= r.trace[k - 1] + 1e-8 * (1 + std::abs(r.trace[k - 1])));
    }
  }
}

TEST_CASE("interior guard keeps iterates in the open domain") {
  // the unconstrained entropy minimizer of f_x sits at x, close to the
  // boundary; the first full step from the init would leave the orthant
  const Vec x = v2(1e-3, 2.0);
  const auto r = minimize_composite(entropy_fx(x, ConvexFunction::zero(2)), {});
  CHECK(r.converged);
  CHECK((r.minimizer.array() > 0).all());
  CHECK((r.minimizer - x).norm() <= 1e-8);
}

TEST_CASE("iteration cap reports nonconvergence") {
  SolverOptions opts;
  opts.max_iter = 1;
  opts.newton = false;
  const auto r = minimize_composite(entropy_fx(v2(5.0, 0.01), ConvexFunction::zero(2)), {}, opts);
  CHECK(!r.converged);
  CHECK(r.iterations == 1);
  CHECK(std::isfinite(r.objective));
}

TEST_CASE("infeasible start is an error") {
  auto prob = entropy_fx(v2(1.0, 1.0), ConvexFunction::zero(2));
  prob.init = v2(-1.0, -1.0);
  CHECK_THROWS_AS(minimize_composite(prob, {}), InfeasibleStartError);
}

TEST_CASE("solver output is bitwise reproducible") {
  const auto prob = entropy_fx(v2(2.0, 0.3), ConvexFunction::l1(2, 0.4));
  const auto a = minimize_composite(prob, {});
  const auto b = minimize_composite(prob, {});
  CHECK(a.minimizer == b.minimizer);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
  CHECK(a.gap_certificate == b.gap_certificate);
}

TEST_CASE("brute_force_min examples") {
  const GridBox box{Vec::Constant(2, -3.0), Vec::Constant(2, 3.0)};
  const auto bowl = brute_force_min([](const Vec& y) { return (y - v2(1, 2)).squaredNorm(); }, box, 61);
  CHECK((bowl.point - v2(1, 2)).cwiseAbs().maxCoeff() <= 0.05);

  const auto l1 = ConvexFunction::l1(2, 1.0);
  const auto st = brute_force_min(
      [&](const Vec& y) { return l1.value(y) + 0.5 * (v2(2, -0.5) - y).squaredNorm(); }, box, 201);
  CHECK((st.point - v2(1, 0)).cwiseAbs().maxCoeff() <= 0.5 * st.refined_spacing.maxCoeff());

  const auto orth = ConvexFunction::indicator(ConeSpec::nonneg_orthant(2));
  const auto cl = brute_force_min(
      [&](const Vec& y) { return orth.value(y) + (y - v2(-1, 2)).squaredNorm(); }, box, 101);
  CHECK((cl.point.array() >= 0).all());
  CHECK((cl.point - v2(0, 2)).cwiseAbs().maxCoeff() <= 0.5 * cl.refined_spacing.maxCoeff());
}

TEST_CASE("brute_force_min ties and errors") {
  const GridBox box{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)};
  // constant objective: the first grid point in lexicographic order wins
  const auto flat = brute_force_min([](const Vec&) { return 1.0; }, box, 11);
  CHECK(flat.point == box.lo);
  CHECK(flat.on_boundary);

  CHECK_THROWS_AS(brute_force_min([](const Vec&) { return kInf; }, box, 11), DomainError);
  const GridBox big{Vec::Constant(4, -1.0), Vec::Constant(4, 1.0)};
  CHECK_THROWS_AS(brute_force_min([](const Vec&) { return 0.0; }, big, 11), UsageError);
  CHECK_THROWS_AS(brute_force_min([](const Vec&) { return 0.0; }, box, 402), UsageError);
}

TEST_CASE("brute_force_min in three dimensions") {
  Vec target(3);
  target << 0.3, -0.7, 0.45;
  const GridBox box{Vec::Constant(3, -1.0), Vec::Constant(3, 1.0)};
  const auto r = brute_force_min([&](const Vec& y) { return (y - target).squaredNorm(); }, box, 41);
  CHECK((r.point - target).cwiseAbs().maxCoeff() <= 0.5 * r.refined_spacing.maxCoeff() + 1e-15);
}

TEST_CASE("grid oracles: parallel equals serial") {
  const GridBox box{Vec::Constant(2, -3.0), Vec::Constant(2, 3.0)};
  // many exact ties: |y|_1 has a flat valley on the axes after rounding
  const auto obj = [](const Vec& y) { return std::floor(4 * y.cwiseAbs().sum()); };
  const auto s = brute_force_min(obj, box, 201, Execution::serial);
  const auto p = brute_force_min(obj, box, 201, Execution::parallel);
  CHECK(s.point == p.point);
  CHECK(s.value == p.value);

  const auto g = [](const Vec& y) { return 0.5 * y.squaredNorm() + std::abs(y[0]); };
  const auto cs = numeric_conjugate(g, v2(0.4, -1.3), box, 201, Execution::serial);
  const auto cp = numeric_conjugate(g, v2(0.4, -1.3), box, 201, Execution::parallel);
  CHECK(cs.value == cp.value);
  CHECK(cs.argmax == cp.argmax);
}

TEST_CASE("numeric_conjugate examples") {
  const GridBox box{Vec::Constant(2, -4.0), Vec::Constant(2, 4.0)};
  const auto half = numeric_conjugate([](const Vec& y) { return 0.5 * y.squaredNorm(); }, v2(1, 0), box, 201);
  CHECK(std::abs(half.value - 0.5) <= half.refined_spacing.maxCoeff());
  CHECK(!half.boundary_warning);

  const auto orth = ConvexFunction::indicator(ConeSpec::nonneg_orthant(2));
  const auto g = [&](const Vec& y) { return orth.value(y); };
  const auto neg = numeric_conjugate(g, v2(-1, -1), box, 201);
  CHECK(std::abs(neg.value) <= neg.refined_spacing.maxCoeff());
  CHECK(!neg.boundary_warning);

  const auto up = numeric_conjugate(g, v2(1, 0), box, 201);
  CHECK(up.boundary_warning);

  const GridBox line{Vec::Constant(3, -1.0), Vec::Constant(3, 1.0)};
  CHECK_THROWS_AS(numeric_conjugate([](const Vec&) { return 0.0; }, Vec::Zero(3), line, 11),
                  UsageError);
}
