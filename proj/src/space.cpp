#include "moreau/space.hpp"

#include <cmath>

namespace moreau {

double pair(const PrimalVector& x, const DualVector& xstar) {
  if (x.dim() != xstar.dim()) throw UsageError("pair: dimension mismatch");
  return x.coords().dot(xstar.coords());
}

double pair(const DualVector& xstar, const PrimalVector& x) { return pair(x, xstar); }

double p_norm(const Vec& v, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw UnsupportedError("p_norm: unsupported geometry, need 1 < p < inf");
  }
  // Scale by the largest magnitude to avoid overflow in |v_i|^p.
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double p_norm(const PrimalVector& x, double p) { return p_norm(x.coords(), p); }
double p_norm(const DualVector& xstar, double p) { return p_norm(xstar.coords(), p); }

double conjugate_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw UnsupportedError("conjugate_exponent: need 1 < p < inf");
  }
  return p / (p - 1.0);
}

void ToleranceProfile::validate() const {
  if (!(value_tol > 0) || !(vector_tol > 0) || !(fd_step > 0) || !(gap_tol > 0)) {
    throw UsageError("tolerance profile: all tolerances must be strictly positive");
  }
  if (fd_step * fd_step < std::numeric_limits<double>::epsilon()) {
    throw UsageError("tolerance profile: fd_step^2 must be >= machine epsilon");
  }
}

Vec Rng::gaussian(Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(engine_);
  return v;
}

Mat Rng::gaussian(Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(engine_);
  return m;
}

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

}  // namespace moreau
