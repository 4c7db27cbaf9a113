#include <doctest.h>

#include <cmath>

#include "moreau/space.hpp"

using namespace moreau;

namespace {

template <class A, class B>
concept Pairable = requires(const A& a, const B& b) { pair(a, b); };

}  // namespace

// Two primals (or two duals) must not pair; only X x X* does.
static_assert(Pairable<PrimalVector, DualVector>);
static_assert(Pairable<DualVector, PrimalVector>);
static_assert(!Pairable<PrimalVector, PrimalVector>);
static_assert(!Pairable<DualVector, DualVector>);

TEST_CASE("pair examples") {
  CHECK(pair(PrimalVector{1, 2}, DualVector{3, -1}) == 1.0);
  CHECK(pair(PrimalVector{0, 0}, DualVector{5, 7}) == 0.0);
  CHECK(pair(PrimalVector{1, 0}, DualVector{0, 1}) == 0.0);
  CHECK_THROWS_AS(pair(PrimalVector{1, 2}, DualVector{1, 2, 3}), UsageError);
}

TEST_CASE("p_norm examples") {
  CHECK(p_norm(PrimalVector{3, 4}, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(p_norm(PrimalVector{1, 1}, 4.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
  CHECK(p_norm(PrimalVector{0, 0, 0}, 3.0) == 0.0);
  CHECK_THROWS_AS(p_norm(PrimalVector{1, 1}, 1.0), UnsupportedError);
  CHECK_THROWS_AS(p_norm(PrimalVector{1, 1}, 0.5), UnsupportedError);
  CHECK_THROWS_AS(p_norm(PrimalVector{1, 1}, INFINITY), UnsupportedError);
}

TEST_CASE("vectors reject non-finite coordinates") {
  CHECK_THROWS_AS(PrimalVector(Vec::Constant(2, NAN)), UsageError);
  CHECK_THROWS_AS(DualVector(Vec::Constant(2, INFINITY)), UsageError);
  CHECK_THROWS_AS(PrimalVector(Vec(0)), UsageError);
}

TEST_CASE("pair is bilinear") {
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const Index n = 1 + k % 9;
    const PrimalVector x(rng.gaussian(n)), y(rng.gaussian(n));
    const DualVector z(rng.gaussian(n));
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const double lhs = pair(a * x + b * y, z);
    const double rhs = a * pair(x, z) + b * pair(y, z);
    const double scale = std::abs(a * pair(x, z)) + std::abs(b * pair(y, z)) + 1.0;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("p_norm is a norm on samples") {
  Rng rng(11);
  for (double p : {1.5, 2.0, 3.0, 4.0, 7.0}) {
    for (int k = 0; k < 100; ++k) {
      const Vec x = rng.gaussian(5), y = rng.gaussian(5);
      CHECK(std::abs(p_norm(x, p) - p_norm(y, p)) <= p_norm(Vec(x - y), p) + 1e-14);
      CHECK(p_norm(Vec(2.5 * x), p) == doctest::Approx(2.5 * p_norm(x, p)).epsilon(1e-14));
    }
  }
}

TEST_CASE("p_norm survives large magnitudes") {
  CHECK(p_norm(Vec::Constant(2, 1e200), 4.0) ==
        doctest::Approx(1e200 * std::pow(2.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("conjugate exponent") {
  CHECK(conjugate_exponent(4.0) == doctest::Approx(4.0 / 3.0));
  CHECK(conjugate_exponent(2.0) == 2.0);
  CHECK_THROWS_AS(conjugate_exponent(1.0), UnsupportedError);
}

TEST_CASE("tolerance profile validation") {
  ToleranceProfile t;
  CHECK_NOTHROW(t.validate());
  CHECK(t.value_tol == 1e-8);
  CHECK(t.vector_tol == 1e-6);
  CHECK(t.fd_step == 1e-6);
  CHECK(t.gap_tol == 1e-6);
  t.gap_tol = 0;
  CHECK_THROWS_AS(t.validate(), UsageError);
  t = {};
  t.fd_step = 1e-9;
  CHECK_THROWS_AS(t.validate(), UsageError);
}

TEST_CASE("rng is reproducible") {
  Rng a(42), b(42), c(43);
  const Vec va = a.gaussian(6);
  CHECK(va == b.gaussian(6));
  CHECK(va != c.gaussian(6));
  CHECK(a.seed() == 42);
}
