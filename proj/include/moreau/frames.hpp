#pragma once

// Finite frames in R^n: frame operator, canonical dual frame, and the
// decomposition x = a(x) + sum_i <b(x), e*_i> e*_i.

#include <vector>

#include "moreau/decomposition.hpp"

namespace moreau {

struct FrameSystem {
  /// Frame vectors e_i as columns (n x m, m >= n).
  Mat vectors;
  /// S = sum_i e_i e_i^T.
  Mat s;
  Mat s_inv;
  /// Canonical dual frame e*_i = S^{-1} e_i as columns.
  Mat dual;
  /// Optimal frame bounds: extreme eigenvalues of S.
  double alpha = 0.0;
  double beta = 0.0;

  Index dim() const { return vectors.rows(); }
  Index size() const { return vectors.cols(); }
  /// S x computed as sum_i <x, e_i> e_i.
  Vec apply(const Vec& x) const;
  /// sum_i <x, e_i> e*_i.
  Vec reconstruct(const Vec& x) const;
};

/// Throws NotAFrameError when the family does not span R^n.
FrameSystem build_frame(const std::vector<PrimalVector>& vectors);
FrameSystem build_frame(const Mat& columns);

/// f = 1/2 sum_i |<., e_i>|^2 = 1/2<., S .>.
LegendreFunction frame_legendre(const FrameSystem& fs);

/// 1/2 sum_i |<x*, e*_i>|^2, the frame form of f*.
double frame_conjugate_sum(const FrameSystem& fs, const DualVector& xstar);

struct FrameDecomposition {
  PrimalVector a;
  DualVector b;
  /// sum_i <b, e*_i> e*_i.
  PrimalVector synthesis;
  /// |x - a - synthesis|.
  double reconstruction_residual = kInf;
  /// |synthesis - S^{-1} b|.
  double synthesis_residual = kInf;
  DecompositionReport report;
};

FrameDecomposition frame_decompose(const FrameSystem& fs, const ConvexFunction& phi,
                                   const PrimalVector& x, const ProxOptions& opts = {});

}  // namespace moreau
