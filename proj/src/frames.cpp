#include "moreau/frames.hpp"

#include <Eigen/Eigenvalues>

namespace moreau {

Vec FrameSystem::apply(const Vec& x) const {
  Vec out = Vec::Zero(dim());
  for (Index i = 0; i < size(); ++i) out += x.dot(vectors.col(i)) * vectors.col(i);
  return out;
}

Vec FrameSystem::reconstruct(const Vec& x) const {
  Vec out = Vec::Zero(dim());
  for (Index i = 0; i < size(); ++i) out += x.dot(vectors.col(i)) * dual.col(i);
  return out;
}

FrameSystem build_frame(const std::vector<PrimalVector>& vectors) {
  if (vectors.empty()) throw NotAFrameError("frame: empty family");
  const Index n = vectors.front().dim();
  Mat cols(n, static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dim() != n) throw UsageError("frame: vectors of different lengths");
    cols.col(static_cast<Index>(i)) = vectors[i].coords();
  }
  return build_frame(cols);
}

FrameSystem build_frame(const Mat& columns) {
  const Index n = columns.rows();
  if (n < 1 || columns.cols() < 1) throw NotAFrameError("frame: empty family");
  if (!columns.allFinite()) throw UsageError("frame: non-finite entries");

  FrameSystem fs;
  fs.vectors = columns;
  fs.s = columns * columns.transpose();
  fs.s = 0.5 * (fs.s + fs.s.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> eig(fs.s);
  const Vec& ev = eig.eigenvalues();
  const double scale = std::max(1.0, ev.maxCoeff());
  if (columns.cols() < n || ev.minCoeff() <= 1e-12 * scale) {
    throw NotAFrameError("frame: the family does not span R^" + std::to_string(n));
  }
  fs.alpha = ev.minCoeff();
  fs.beta = ev.maxCoeff();
  fs.s_inv = fs.s.llt().solve(Mat::Identity(n, n));
  fs.s_inv = 0.5 * (fs.s_inv + fs.s_inv.transpose()).eval();
  fs.dual = fs.s_inv * columns;
  return fs;
}

LegendreFunction frame_legendre(const FrameSystem& fs) {
  return LegendreFunction::quadratic_spd(fs.s);
}

double frame_conjugate_sum(const FrameSystem& fs, const DualVector& xstar) {
  if (xstar.dim() != fs.dim()) throw UsageError("frame: dimension mismatch");
  return 0.5 * (fs.dual.transpose() * xstar.coords()).squaredNorm();
}

FrameDecomposition frame_decompose(const FrameSystem& fs, const ConvexFunction& phi,
                                   const PrimalVector& x, const ProxOptions& opts) {
  if (x.dim() != fs.dim()) throw UsageError("frame: dimension mismatch");
  const LegendreFunction f = frame_legendre(fs);
  DecompositionReport r = decompose(f, phi, x, opts);

  const Vec& b = r.dstar.coords();
  Vec synth = Vec::Zero(fs.dim());
  for (Index i = 0; i < fs.size(); ++i) synth += b.dot(fs.dual.col(i)) * fs.dual.col(i);

  FrameDecomposition out{r.p, r.dstar, PrimalVector(synth), kInf, kInf, {}};
  out.reconstruction_residual = (x.coords() - r.p.coords() - synth).norm();
  out.synthesis_residual = (synth - fs.s_inv * b).norm();
  out.report = std::move(r);
  return out;
}

}  // namespace moreau
