#include <doctest.h>

#include <cmath>
#include <vector>

#include "moreau/convex.hpp"
#include "moreau/solvers.hpp"

using namespace moreau;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::vector<ConvexFunction> catalog(Index n, Rng& rng) {
  const Mat b = rng.gaussian(n, n);
  Mat gens = rng.gaussian(n, std::max<Index>(1, n / 2));
  return {ConvexFunction::zero(n),
          ConvexFunction::linear(rng.gaussian(n)),
          ConvexFunction::l1(n, 0.7),
          ConvexFunction::box(Vec::Constant(n, -0.5), Vec::Constant(n, 1.5)),
          ConvexFunction::box_support(Vec::Constant(n, -0.5), Vec::Constant(n, 1.5)),
          ConvexFunction::singleton(rng.gaussian(n)),
          ConvexFunction::indicator(ConeSpec::nonneg_orthant(n)),
          ConvexFunction::indicator(ConeSpec::second_order(n)),
          ConvexFunction::indicator(ConeSpec::subspace(gens)),
          ConvexFunction::indicator(ConeSpec::halfspace(rng.gaussian(n))),
          ConvexFunction::indicator(ConeSpec::ray(rng.gaussian(n))),
          ConvexFunction::quadratic(b.transpose() * b, rng.gaussian(n), 0.3)};
}

std::vector<ConeSpec> cones(Index n, Rng& rng) {
  return {ConeSpec::nonneg_orthant(n), ConeSpec::second_order(n),
          ConeSpec::subspace(rng.gaussian(n, 1)), ConeSpec::halfspace(rng.gaussian(n)),
          ConeSpec::ray(rng.gaussian(n)), ConeSpec::nonneg_orthant(n).polar(),
          ConeSpec::second_order(n).polar()};
}

}  // namespace

TEST_CASE("eval_phi examples") {
  CHECK(eval_phi(ConvexFunction::l1(2, 2.0), {1, -3}) == 8.0);
  const auto orth = ConvexFunction::indicator(ConeSpec::nonneg_orthant(2));
  CHECK(eval_phi(orth, {1, 0}) == 0.0);
  CHECK(eval_phi(orth, {-1, 0}) == kInf);
}

TEST_CASE("eval_conj_phi examples") {
  CHECK(eval_conj_phi(ConvexFunction::indicator(ConeSpec::nonneg_orthant(2)), {-1, -2}) == 0.0);
  CHECK(eval_conj_phi(ConvexFunction::l1(2, 2.0), {1, 3}) == kInf);
  CHECK(eval_conj_phi(ConvexFunction::zero(2), {0, 0}) == 0.0);
  CHECK(eval_conj_phi(ConvexFunction::zero(2), {0, 1e-3}) == kInf);
  CHECK(eval_conj_phi(ConvexFunction::linear(v2(1, 2)), {1, 2}) == 0.0);
  // support function of [a, b]: sum max(a s, b s)
  const auto box = ConvexFunction::box(v2(-1, 0), v2(2, 3));
  CHECK(eval_conj_phi(box, {1, -1}) == doctest::Approx(2.0 + 0.0));
  CHECK(eval_conj_phi(box, {-2, 1}) == doctest::Approx(2.0 + 3.0));
}

TEST_CASE("euclid_prox examples") {
  const PrimalVector p = euclid_prox(ConvexFunction::l1(2, 1.0), {2, -0.5}, 1.0);
  CHECK(p == PrimalVector{1, 0});
  CHECK(euclid_prox(ConvexFunction::indicator(ConeSpec::nonneg_orthant(2)), {1, -2}) ==
        PrimalVector{1, 0});
  CHECK(euclid_prox(ConvexFunction::zero(2), {5, 5}) == PrimalVector{5, 5});
  CHECK_THROWS_AS(euclid_prox(ConvexFunction::zero(2), {5, 5}, 0.0), UsageError);
}

TEST_CASE("fenchel_young_gap examples") {
  CHECK(fenchel_young_gap(ConvexFunction::l1(2, 1.0), PrimalVector{2, 0}, DualVector{1, 0.3}) ==
        doctest::Approx(0.0));
  CHECK(fenchel_young_gap(ConvexFunction::indicator(ConeSpec::nonneg_orthant(2)), PrimalVector{1, 0},
                          DualVector{0, -2}) == doctest::Approx(0.0));
  CHECK(fenchel_young_gap(ConvexFunction::zero(2), PrimalVector{1, 1}, DualVector{1, 1}) == kInf);
  // not a subgradient: sign mismatch on the first coordinate
  CHECK(fenchel_young_gap(ConvexFunction::l1(2, 1.0), PrimalVector{2, 0}, DualVector{-1, 0}) ==
        doctest::Approx(4.0));
}

TEST_CASE("polar_project examples") {
  CHECK(polar_project(ConeSpec::nonneg_orthant(2), {1, -2}) == PrimalVector{0, -2});
  const PrimalVector q = polar_project(ConeSpec::subspace(v2(1, 0)), {3, 4});
  CHECK(q[0] == doctest::Approx(0.0));
  CHECK(q[1] == doctest::Approx(4.0));
  // (2, 1.2, 1.6) has |u| = 2 = t: on the boundary of the cone
  const PrimalVector z = polar_project(ConeSpec::second_order(3), {2, 1.2, 1.6});
  CHECK(z.coords().norm() <= 1e-12);
  const PrimalVector w = polar_project(ConeSpec::second_order(3), {3, 1, 0});
  CHECK(w.coords().norm() == 0.0);
}

TEST_CASE("cone membership is positively homogeneous") {
  Rng rng(2);
  for (const Index n : {2, 3, 6}) {
    for (const auto& k : cones(n, rng)) {
      CAPTURE(k.name());
      for (int s = 0; s < 50; ++s) {
        const Vec x = k.project(rng.gaussian(n));
        REQUIRE(k.contains(x));
        CHECK(k.contains(Vec(0.5 * x)));
        CHECK(k.contains(Vec(2.0 * x)));
      }
    }
  }
}

TEST_CASE("Pythagoras, sum and orthogonality for every cone") {
  Rng rng(4);
  for (const Index n : {2, 5, 16}) {
    for (const auto& k : cones(n, rng)) {
      CAPTURE(k.name());
      const ConeSpec kp = k.polar();
      for (int s = 0; s < 50; ++s) {
        const Vec x = rng.gaussian(n);
        const Vec a = k.project(x), b = kp.project(x);
        const double d_k = (x - a).squaredNorm(), d_p = (x - b).squaredNorm();
        CHECK(std::abs(x.squaredNorm() - d_k - d_p) <= 1e-8 * (1 + x.squaredNorm()));
        CHECK((x - a - b).norm() <= 1e-12 * (1 + x.norm()));
        CHECK(std::abs(a.dot(b)) <= 1e-12 * (1 + x.squaredNorm()));
        CHECK(kp.contains(b));
      }
    }
  }
}

TEST_CASE("polar of polar is the cone") {
  Rng rng(6);
  for (const auto& k : cones(4, rng)) {
    CAPTURE(k.name());
    const ConeSpec kk = k.polar().polar();
    for (int s = 0; s < 20; ++s) {
      const Vec x = rng.gaussian(4);
      CHECK((kk.project(x) - k.project(x)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("catalog invariants") {
  Rng rng(8);
  for (const Index n : {2, 5}) {
    for (const auto& phi : catalog(n, rng)) {
      CAPTURE(phi.label());
      ConvexFunction star = ConvexFunction::zero(n);
      bool has_star = true;
      try {
        star = phi.conjugate();
      } catch (const UnsupportedError&) {
        has_star = false;
      }
      for (int s = 0; s < 50; ++s) {
        const Vec u = rng.gaussian(n), w = rng.gaussian(n);
        const Vec x = phi.prox(u, 1.0), y = phi.prox(w, 1.0);
        const double fx = phi.value(x), fy = phi.value(y);
        // midpoint convexity on points of dom phi
        CHECK(phi.value(Vec(0.5 * (x + y))) <= 0.5 * fx + 0.5 * fy + 1e-8 * (1 + std::abs(fx) + std::abs(fy)));

        // Fenchel-Young inequality on pairs with finite values
        const Vec xs = rng.gaussian(n);
        const double cs = phi.conjugate_value(xs);
        if (std::isfinite(cs)) CHECK(fx + cs >= x.dot(xs) - 1e-8);

        // prox optimality through the gap, for two step sizes
        for (double gamma : {1.0, 0.3}) {
          const Vec p = phi.prox(u, gamma);
          const Vec sub = (u - p) / gamma;
          CHECK(fenchel_young_gap(phi, p, sub) <= 1e-6 * (1 + u.norm()));
        }

        // Moreau identity with the conjugate entry
        if (has_star) {
          CHECK((phi.prox(u, 1.0) + star.prox(u, 1.0) - u).norm() <= 1e-6 * (1 + u.norm()));
          const double a = star.value(u), b = phi.conjugate_value(u);
          if (std::isinf(a) || std::isinf(b)) {
            CHECK(a == b);
          } else {
            CHECK(a == doctest::Approx(b).epsilon(1e-10));
          }
        }
      }
    }
  }
}

TEST_CASE("prox_step matches prox differences") {
  Rng rng(10);
  for (const auto& phi : catalog(3, rng)) {
    CAPTURE(phi.label());
    for (int s = 0; s < 20; ++s) {
      const Vec y = phi.prox(rng.gaussian(3), 1.0);
      const Vec u = rng.gaussian(3);
      const Vec expected = phi.prox(Vec(y + u), 0.7) - y;
      CHECK((phi.prox_step(y, u, 0.7) - expected).norm() <= 1e-10 * (1 + y.norm() + u.norm()));
    }
  }
}

TEST_CASE("prox jacobian matches finite differences off kinks") {
  Rng rng(12);
  const double h = 1e-7;
  for (const auto& phi : catalog(3, rng)) {
    CAPTURE(phi.label());
    int tested = 0;
    for (int s = 0; s < 40 && tested < 10; ++s) {
      const Vec x = 2.0 * rng.gaussian(3);
      const Mat jac = phi.prox_jacobian(x, 1.0);
      Mat fd(3, 3);
      for (Index i = 0; i < 3; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        fd.col(i) = (phi.prox(xp, 1.0) - phi.prox(xm, 1.0)) / (2 * h);
      }
      // a kink inside the stencil makes the central difference disagree
      // with both one-sided limits; skip those points
      Vec xp2 = x;
      xp2.array() += 3 * h;
      if ((phi.prox_jacobian(xp2, 1.0) - jac).norm() > 1e-9) continue;
      ++tested;
      CHECK((fd - jac).norm() <= 1e-5);
    }
  }
}

TEST_CASE("quadratic conjugate entry needs definite Q") {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 1.0;
  const auto phi = ConvexFunction::quadratic(q, v2(0, 1));
  CHECK_THROWS_AS(phi.conjugate(), UnsupportedError);
  // phi* = 1/2 s_0^2 on {s : s_1 = 1}
  CHECK(phi.conjugate_value(v2(2, 1)) == doctest::Approx(2.0));
  CHECK(phi.conjugate_value(v2(2, 0)) == kInf);
  Mat bad(2, 2);
  bad << 1, 0, 0, -1;
  CHECK_THROWS_AS(ConvexFunction::quadratic(bad, v2(0, 0)), UsageError);
}

TEST_CASE("conjugates agree with the grid oracle in the plane") {
  const GridBox box{Vec::Constant(2, -4.0), Vec::Constant(2, 4.0)};
  Rng rng(14);
  const Vec c = v2(0.3, -0.2);
  const std::vector<ConvexFunction> bounded = {
      ConvexFunction::box(v2(-1, -0.5), v2(2, 1)),
      ConvexFunction::quadratic(Mat::Identity(2, 2) * 2.0, c, 0.1)};
  for (const auto& phi : bounded) {
    CAPTURE(phi.label());
    for (int s = 0; s < 5; ++s) {
      const Vec xs = rng.gaussian(2);
      const auto est = numeric_conjugate([&](const Vec& x) { return phi.value(x); }, xs, box, 201);
      const double exact = phi.conjugate_value(xs);
      CHECK(!est.boundary_warning);
      CHECK(std::abs(est.value - exact) <= est.refined_spacing.maxCoeff());
    }
  }
  // l1 with |s|_inf < lambda: conjugate 0, attained at the origin
  const auto l1 = ConvexFunction::l1(2, 1.0);
  const auto est = numeric_conjugate([&](const Vec& x) { return l1.value(x); }, v2(0.5, -0.2), box, 201);
  CHECK(std::abs(est.value) <= est.refined_spacing.maxCoeff());
}
