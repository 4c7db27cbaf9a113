#include <doctest.h>

#include <cmath>
#include <vector>

#include "moreau/legendre.hpp"
#include "moreau/solvers.hpp"

using namespace moreau;

namespace {

const double e = std::exp(1.0);

std::vector<LegendreFunction> catalog(Index n) {
  Rng rng(5);
  const Mat b = rng.gaussian(n, n);
  return {LegendreFunction::euclidean(n),
          LegendreFunction::quadratic_spd(b.transpose() * b / double(n) + 0.5 * Mat::Identity(n, n)),
          LegendreFunction::pnorm_energy(n, 1.5),
          LegendreFunction::pnorm_energy(n, 3.0),
          LegendreFunction::pnorm_energy(n, 4.0),
          LegendreFunction::shannon_entropy(n),
          LegendreFunction::exp_sum(n)};
}

Vec interior_sample(const LegendreFunction& f, Rng& rng) {
  const Vec g = rng.gaussian(f.dim());
  if (f.dom_f().kind == DomainKind::full_space) return g;
  return Vec(f.dom_f().lower.array() + g.array().abs() + 0.1);
}

}  // namespace

TEST_CASE("eval_f examples") {
  CHECK(eval_f(LegendreFunction::euclidean(2), {3, 4}) == 12.5);
  CHECK(eval_f(LegendreFunction::shannon_entropy(2), {1, 1}) == doctest::Approx(-2.0));
  CHECK(eval_f(LegendreFunction::shannon_entropy(2), {-1, 1}) == kInf);
  // 0 log 0 = 0 on the boundary of the closed orthant.
  CHECK(eval_f(LegendreFunction::shannon_entropy(2), {0, 1}) == doctest::Approx(-1.0));
}

TEST_CASE("grad_f examples") {
  const DualVector g = grad_f(LegendreFunction::euclidean(2), {3, 4});
  CHECK(g == DualVector{3, 4});

  const DualVector h = grad_f(LegendreFunction::shannon_entropy(2), {1, e});
  CHECK(h[0] == doctest::Approx(0.0));
  CHECK(h[1] == doctest::Approx(1.0));

  const auto f4 = LegendreFunction::pnorm_energy(2, 4.0);
  const DualVector j = grad_f(f4, {1, 1});
  CHECK(j[0] == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
  CHECK(j[1] == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
  // Finite-difference cross-check of the same closed form.
  const double hstep = 1e-6;
  for (Index i = 0; i < 2; ++i) {
    Vec xp(2), xm(2);
    xp << 1, 1;
    xm << 1, 1;
    xp[i] += hstep;
    xm[i] -= hstep;
    CHECK(std::abs((f4.value(xp) - f4.value(xm)) / (2 * hstep) - j[i]) <= 1e-8);
  }

  CHECK_THROWS_AS(grad_f(LegendreFunction::shannon_entropy(2), {0, 1}), DomainError);
}

TEST_CASE("conjugate examples") {
  CHECK(eval_conj(LegendreFunction::euclidean(2), {3, 4}) == 12.5);

  const auto ent = LegendreFunction::shannon_entropy(2);
  CHECK(eval_conj(ent, {0, 0}) == doctest::Approx(2.0));
  const PrimalVector g = grad_conj(ent, {0, 0});
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(1.0));

  CHECK(eval_conj(LegendreFunction::pnorm_energy(2, 4.0), {1, 0}) == doctest::Approx(0.5));

  const auto ent_star = ent.conjugate();
  CHECK(ent_star.name() == "exp_sum");
  CHECK(ent_star.conjugate().name() == "shannon_entropy");
  CHECK(LegendreFunction::pnorm_energy(3, 4.0).conjugate().exponent() ==
        doctest::Approx(4.0 / 3.0));
}

TEST_CASE("bregman examples") {
  CHECK(bregman(LegendreFunction::euclidean(2), PrimalVector{1, 0}, PrimalVector{0, 0}) == 0.5);
  const auto ent = LegendreFunction::shannon_entropy(2);
  CHECK(bregman(ent, PrimalVector{2, 3}, PrimalVector{2, 3}) == doctest::Approx(0.0));
  // Substitution by hand: (-2) - 2(e log e - e) - <(1-e, 1-e), (1, 1)>.
  const double expected = -2.0 - 2.0 * (e * std::log(e) - e) - 2.0 * (1.0 - e);
  CHECK(bregman(ent, PrimalVector{1, 1}, PrimalVector{e, e}) == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(2 * e - 4));
  // x off int dom f.
  CHECK(bregman(ent, PrimalVector{1, 1}, PrimalVector{0, 1}) == kInf);
}

TEST_CASE("duality map examples") {
  CHECK(duality_map(2.0, {3, 4}) == DualVector{3, 4});
  const DualVector j = duality_map(4.0, {1, 1});
  CHECK(j[0] == doctest::Approx(0.707107).epsilon(1e-6));
  CHECK(pair(PrimalVector{1, 1}, j) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::pow(p_norm(PrimalVector{1, 1}, 4.0), 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(duality_map(3.0, PrimalVector::zero(3)) == DualVector::zero(3));
  CHECK_THROWS_AS(duality_map(1.0, {1, 1}), UnsupportedError);
}

TEST_CASE("duality map norm identity on samples") {
  Rng rng(3);
  for (double p : {1.5, 3.0, 4.0}) {
    const double q = conjugate_exponent(p);
    for (int k = 0; k < 100; ++k) {
      const PrimalVector x(rng.gaussian(4));
      const DualVector j = duality_map(p, x);
      const double nx = std::pow(p_norm(x, p), 2);
      CHECK(std::abs(pair(x, j) - nx) <= 1e-8 * (1 + nx));
      CHECK(std::abs(std::pow(p_norm(j, q), 2) - nx) <= 1e-8 * (1 + nx));
    }
  }
}

TEST_CASE("spd validation") {
  Mat m(2, 2);
  m << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(LegendreFunction::quadratic_spd(m), UsageError);
  m << 1, 2, 2, 1;
  CHECK_THROWS_AS(LegendreFunction::quadratic_spd(m), UsageError);
  CHECK_THROWS_AS(LegendreFunction::pnorm_energy(2, 1.0), UnsupportedError);
}

TEST_CASE("catalog flags and domains") {
  for (const auto& f : catalog(3)) {
    CAPTURE(f.label());
    CHECK(f.dom_f().contains_interior(f.dom_f().interior_point));
    CHECK(f.dom_fstar().contains_interior(f.dom_fstar().interior_point));
    if (f.supercoercive()) CHECK(f.dom_fstar().kind == DomainKind::full_space);
  }
  CHECK(LegendreFunction::shannon_entropy(2).supercoercive());
  CHECK(!LegendreFunction::exp_sum(2).supercoercive());
}

TEST_CASE("Legendre round trip and Fenchel-Young equality") {
  Rng rng(17);
  for (const Index n : {2, 5, 16}) {
    for (const auto& f : catalog(n)) {
      CAPTURE(f.label());
      for (int k = 0; k < 100; ++k) {
        const PrimalVector x(interior_sample(f, rng));
        const DualVector g = grad_f(f, x);
        const double nx = x.coords().norm();
        CHECK((grad_conj(f, g).coords() - x.coords()).norm() <= 1e-6 * (1 + nx));
        const double fx = eval_f(f, x);
        CHECK(std::abs(fx + eval_conj(f, g) - pair(x, g)) <= 1e-8 * (1 + std::abs(fx) + nx));
      }
    }
  }
}

TEST_CASE("gradients match central differences") {
  Rng rng(19);
  const double h = 1e-6;
  for (const auto& f : catalog(4)) {
    CAPTURE(f.label());
    for (int k = 0; k < 100; ++k) {
      Vec x = interior_sample(f, rng);
      // keep |x_i| >= 0.05 so the stencil stays in the smooth region of lp
      for (Index i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) < 0.05) x[i] = x[i] < 0 ? -0.05 : 0.05;
      }
      const Vec g = f.gradient(x);
      for (Index i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        CHECK(std::abs((f.value(xp) - f.value(xm)) / (2 * h) - g[i]) <= 1e-5);
      }
    }
  }
}

TEST_CASE("bregman is nonnegative and strict") {
  Rng rng(23);
  for (const auto& f : catalog(3)) {
    CAPTURE(f.label());
    for (int k = 0; k < 100; ++k) {
      const Vec x = interior_sample(f, rng);
      const Vec y = interior_sample(f, rng);
      CHECK(bregman(f, y, x) >= -1e-12);
      CHECK(bregman(f, x, x) == doctest::Approx(0.0).epsilon(1e-12).scale(1 + std::abs(f.value(x))));
      if ((x - y).norm() > 1e-3) CHECK(bregman(f, y, x) > 0.0);
    }
  }
}

TEST_CASE("conjugates agree with the grid oracle in the plane") {
  const GridBox box{Vec::Constant(2, -6.0), Vec::Constant(2, 6.0)};
  const GridBox pos{Vec::Constant(2, 0.0), Vec::Constant(2, 6.0)};
  Rng rng(29);
  for (const auto& f : catalog(2)) {
    if (f.name() == "exp_sum") continue;  // sup not attained for s <= 0
    CAPTURE(f.label());
    const bool orthant = f.dom_f().kind != DomainKind::full_space;
    for (int k = 0; k < 5; ++k) {
      const Vec s = (0.8 * rng.gaussian(2)).cwiseMax(-1.0).cwiseMin(1.0);
      const auto est = numeric_conjugate([&](const Vec& x) { return f.value(x); }, s,
                                         orthant ? pos : box, 201);
      CHECK(!est.boundary_warning);
      // Grid error in the value is second order in the spacing at an
      // interior maximizer; the documented spacing bound is generous.
      CHECK(std::abs(est.value - f.conj_value(s)) <= est.refined_spacing.maxCoeff());
    }
  }
}
