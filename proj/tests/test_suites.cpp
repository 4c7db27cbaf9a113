#include <doctest.h>

#include <omp.h>

#include <set>

#include "moreau/suites.hpp"

using namespace moreau;

namespace {

bool same_report(const DecompositionReport& a, const DecompositionReport& b) {
  return a.p == b.p && a.dstar == b.dstar && a.reconstruction == b.reconstruction &&
         a.residual_i == b.residual_i && a.residual_ii == b.residual_ii &&
         a.residual_iii == b.residual_iii && a.residual_iv == b.residual_iv &&
         a.iterations == b.iterations && a.newton_steps == b.newton_steps;
}

}  // namespace

TEST_CASE("derive_seed gives distinct streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("sampled points are admissible") {
  Rng params(1);
  for (const Index n : {2, 5}) {
    for (const Pairing& pr : theorem_pairings(n, params)) {
      CAPTURE(pr.label());
      const SumInterior si = sum_interior(pr.f.dom_f(), pr.phi.domain());
      Rng rng(2);
      for (int k = 0; k < 50; ++k) {
        const Vec x = sample_admissible(pr.f, pr.phi, rng);
        CHECK(pr.f.dom_f().contains_interior(x));
        CHECK(si.contains(x));
      }
    }
  }
}

TEST_CASE("theorem matrix covers the required pairings") {
  Rng rng(3);
  std::set<std::string> names;
  for (const Pairing& pr : theorem_pairings(4, rng)) names.insert(pr.f.name() + "/" + pr.phi.name());
  for (const char* want : {"euclidean/l1", "euclidean/nonneg_orthant", "quadratic_spd/nonneg_orthant",
                           "pnorm_energy/nonneg_orthant", "pnorm_energy/l1",
                           "shannon_entropy/linear", "shannon_entropy/box"}) {
    CHECK(names.count(want) == 1);
  }
  CHECK(cone_pairings(3).size() == 6);
  CHECK(cone_pairings(1).size() == 3);
}

TEST_CASE("scenario building is deterministic") {
  const auto a = theorem_scenarios({2, 5}, 3, 99);
  const auto b = theorem_scenarios({2, 5}, 3, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == i);
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].seed == b[i].seed);
  }
}

TEST_CASE("parallel fan-out reproduces the serial run bit for bit") {
  omp_set_num_threads(4);
  const auto sc = theorem_scenarios({2, 5, 16}, 4, 20261017);
  ProxOptions opts;
  const auto s = run_scenarios(sc, opts, Execution::serial);
  const auto p = run_scenarios(sc, opts, Execution::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].error == p[i].error);
    CHECK(same_report(s[i].report, p[i].report));
  }
  CHECK(theorem_suite(s, opts.tol).ok());
}

TEST_CASE("cone and resolvent suites") {
  const auto sc = cone_scenarios({3}, 5, 12);
  ProxOptions opts;
  const auto out = run_scenarios(sc, opts);
  const SuiteReport c = cone_suite(out, opts.tol);
  CHECK(c.ok());
  CHECK(c.max_value("cone_reconstruction") <= 1e-6 * 10);
  CHECK(c.max_value("cone_orthogonality") <= 1e-6);
  CHECK(resolvent_suite(sc, out, opts.tol).ok());
}

TEST_CASE("errors inside a scenario are reported, not thrown") {
  auto sc = theorem_scenarios({2}, 1, 5);
  // move an entropy point off the domain
  for (auto& s : sc) {
    if (s.pairing.f.name() == "shannon_entropy") s.x = PrimalVector{-1, 1};
  }
  ProxOptions opts;
  const auto out = run_scenarios(sc, opts);
  int errors = 0;
  for (const auto& o : out) errors += o.error.empty() ? 0 : 1;
  CHECK(errors == 2);
  CHECK(!theorem_suite(out, opts.tol).ok());
}

TEST_CASE("oracle suite in the plane") {
  const auto sc = theorem_scenarios({2}, 1, 77);
  ProxOptions opts;
  const auto out = run_scenarios(sc, opts);
  const SuiteReport s = oracle_suite(sc, out, opts, 101);
  CHECK(s.ok());
  CHECK(s.checks.size() >= sc.size() * 3);
}

TEST_CASE("gradient suite") {
  Rng rng(8);
  const Mat b = rng.gaussian(3, 3);
  const std::vector<LegendreFunction> geoms = {
      LegendreFunction::euclidean(3),
      LegendreFunction::quadratic_spd(b.transpose() * b + Mat::Identity(3, 3)),
      LegendreFunction::pnorm_energy(3, 1.5), LegendreFunction::pnorm_energy(3, 4.0),
      LegendreFunction::shannon_entropy(3)};
  const SuiteReport s = gradient_suite(geoms, 20, 4, ToleranceProfile{});
  CHECK(s.ok());
}
