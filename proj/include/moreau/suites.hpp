#pragma once

// Scenario matrices and the suite runners shared by the CLI, the tests and
// the benchmarks. Scenarios fan out over OpenMP threads; results are stored
// by scenario index so the parallel run reproduces the serial one exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "moreau/decomposition.hpp"
#include "moreau/frames.hpp"

namespace moreau {

struct Pairing {
  LegendreFunction f;
  ConvexFunction phi;

  std::string label() const { return "(" + f.label() + ", " + phi.label() + ")"; }
};

struct Scenario {
  std::size_t index = 0;
  Pairing pairing;
  PrimalVector x;
  std::uint64_t seed = 0;
};

struct ScenarioOutcome {
  DecompositionReport report;
  /// Empty on success; otherwise the error that stopped the scenario.
  std::string error;
};

/// Independent stream per scenario.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// A point of int dom f lying in int(dom f + dom phi): Gaussian on full
/// domains, lower + |g| + 0.1 on orthant-type ones.
Vec sample_admissible(const LegendreFunction& f, const ConvexFunction& phi, Rng& rng);

/// The pairings of the theorem matrix at dimension n. Random parameters
/// (SPD matrix, linear coefficient) come from `rng`.
std::vector<Pairing> theorem_pairings(Index n, Rng& rng);

/// (pnorm_energy(p), indicator of K) for p in {1.5, 3, 4}, K in
/// {orthant, second-order cone}.
std::vector<Pairing> cone_pairings(Index n);

/// `per_pairing` admissible points for every pairing built by `make` at every
/// dimension in `dims`.
template <class Make>
std::vector<Scenario> build_scenarios(const std::vector<Index>& dims, int per_pairing,
                                      std::uint64_t seed, Make make);

std::vector<Scenario> theorem_scenarios(const std::vector<Index>& dims, int per_pairing,
                                        std::uint64_t seed);
std::vector<Scenario> cone_scenarios(const std::vector<Index>& dims, int per_pairing,
                                     std::uint64_t seed);

std::vector<ScenarioOutcome> run_scenarios(const std::vector<Scenario>& scenarios,
                                           const ProxOptions& opts,
                                           Execution exec = Execution::parallel);

/// Theorem identities for every outcome; errors count as failures.
SuiteReport theorem_suite(const std::vector<ScenarioOutcome>& outcomes,
                          const ToleranceProfile& tol);

/// l^p conic decomposition: |x - P_K x - J^{-1}(Pi_{K-}(Jx))| and
/// |<P_K x, Pi_{K-}(Jx)>|.
SuiteReport cone_suite(const std::vector<ScenarioOutcome>& outcomes, const ToleranceProfile& tol);

SuiteReport resolvent_suite(const std::vector<Scenario>& scenarios,
                            const std::vector<ScenarioOutcome>& outcomes,
                            const ToleranceProfile& tol);

/// For n <= 2: aprox, bprox and the dual bprox against brute_force_min, and
/// numeric_conjugate against the closed-form conjugates, all within the
/// refined grid spacing.
SuiteReport oracle_suite(const std::vector<Scenario>& scenarios,
                         const std::vector<ScenarioOutcome>& outcomes, const ProxOptions& opts,
                         int resolution = 201, Execution exec = Execution::parallel);

/// Catalog gradients (and conjugate gradients) against central differences
/// on `count` interior points per geometry, bound 1e-5.
SuiteReport gradient_suite(const std::vector<LegendreFunction>& geometries, int count,
                           std::uint64_t seed, const ToleranceProfile& tol);

/// Frame identities plus frame_decompose for each phi on `count` points.
SuiteReport frame_suite(const FrameSystem& fs, const std::vector<ConvexFunction>& phis, int count,
                        std::uint64_t seed, const ProxOptions& opts);

// ---------------------------------------------------------------------------

template <class Make>
std::vector<Scenario> build_scenarios(const std::vector<Index>& dims, int per_pairing,
                                      std::uint64_t seed, Make make) {
  std::vector<Scenario> out;
  Rng params(seed);
  for (const Index n : dims) {
    for (const Pairing& pr : make(n, params)) {
      for (int k = 0; k < per_pairing; ++k) {
        Scenario s{out.size(), pr, PrimalVector::zero(n), 0};
        s.seed = derive_seed(seed, s.index);
        Rng rng(s.seed);
        s.x = PrimalVector(sample_admissible(pr.f, pr.phi, rng));
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

}  // namespace moreau
