#pragma once

// Primal/dual coordinate vectors on X = R^n, the canonical pairing, l^p norms,
// tolerance policy and seeded randomness.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "moreau/errors.hpp"

namespace moreau {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PrimalTag {};
struct DualTag {};

/// Finite coordinate vector tagged with the space it lives in. Points of X
/// and of X* share the coordinate basis but never mix implicitly.
template <class Space>
class Coords {
 public:
  Coords() = default;

  explicit Coords(Vec v) : v_(std::move(v)) {
    if (v_.size() < 1) throw UsageError("vector dimension must be >= 1");
    if (!v_.allFinite()) throw UsageError("vector has non-finite entries");
  }

  Coords(std::initializer_list<double> values)
      : Coords(Vec(Eigen::Map<const Vec>(values.begin(), static_cast<Index>(values.size())))) {}

  static Coords zero(Index n) { return Coords(Vec::Zero(n)); }

  Index dim() const { return v_.size(); }
  const Vec& coords() const { return v_; }
  double operator[](Index i) const { return v_[i]; }

  friend Coords operator+(const Coords& a, const Coords& b) {
    check_same(a, b);
    return Coords(Vec(a.v_ + b.v_));
  }
  friend Coords operator-(const Coords& a, const Coords& b) {
    check_same(a, b);
    return Coords(Vec(a.v_ - b.v_));
  }
  friend Coords operator-(const Coords& a) { return Coords(Vec(-a.v_)); }
  friend Coords operator*(double s, const Coords& a) { return Coords(Vec(s * a.v_)); }
  friend Coords operator*(const Coords& a, double s) { return s * a; }
  friend bool operator==(const Coords& a, const Coords& b) {
    return a.v_.size() == b.v_.size() && a.v_ == b.v_;
  }

 private:
  static void check_same(const Coords& a, const Coords& b) {
    if (a.dim() != b.dim()) throw UsageError("dimension mismatch");
  }

  Vec v_;
};

using PrimalVector = Coords<PrimalTag>;
using DualVector = Coords<DualTag>;

/// Canonical bilinear form on X x X*.
double pair(const PrimalVector& x, const DualVector& xstar);
double pair(const DualVector& xstar, const PrimalVector& x);

/// l^p norm for 1 < p < oo. On DualVector the caller passes the dual
/// exponent explicitly.
double p_norm(const PrimalVector& x, double p);
double p_norm(const DualVector& xstar, double p);
double p_norm(const Vec& v, double p);

/// Hoelder conjugate: 1/p + 1/p' = 1.
double conjugate_exponent(double p);

/// Reflexive identification X** = X: reinterpret a point of one space as a
/// point of the other. Used when a dual-side object (f*, phi*) is handled by
/// the same machinery as a primal one.
inline PrimalVector as_primal(const DualVector& v) { return PrimalVector(v.coords()); }
inline DualVector as_dual(const PrimalVector& v) { return DualVector(v.coords()); }

struct ToleranceProfile {
  double value_tol = 1e-8;
  double vector_tol = 1e-6;
  double fd_step = 1e-6;
  double gap_tol = 1e-6;

  /// Throws UsageError when a field is non-positive or fd_step^2 underflows
  /// machine epsilon.
  void validate() const;
};

/// Seeded generator; the seed is kept so reports can record it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  Vec gaussian(Index n);
  Mat gaussian(Index rows, Index cols);
  double uniform(double lo, double hi);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace moreau
