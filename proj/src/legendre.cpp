#include "moreau/legendre.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace moreau {

namespace {

// |u_i|^{p-2} is unbounded at u_i = 0 for p < 2; Newton only needs a large
// finite curvature there.
constexpr double kCurvatureCap = 1e16;

double pnorm_value(const Vec& z, double p) {
  const double n = p_norm(z, p);
  return 0.5 * n * n;
}

// N * (|z_i| / N)^{p-1} sgn(z_i), the scale-stable form of
// N^{2-p} |z_i|^{p-1} sgn(z_i).
Vec pnorm_gradient(const Vec& z, double p) {
  const double n = p_norm(z, p);
  Vec g = Vec::Zero(z.size());
  if (n == 0.0) return g;
  for (Index i = 0; i < z.size(); ++i) {
    if (z[i] == 0.0) continue;
    g[i] = std::copysign(n * std::pow(std::abs(z[i]) / n, p - 1.0), z[i]);
  }
  return g;
}

// With u = |z|/N and v_i = u_i^{p-1} sgn(z_i):
//   H = (2 - p) v v^T + (p - 1) diag(u^{p-2}),
// homogeneous of degree 0.
Mat pnorm_hessian(const Vec& z, double p) {
  const Index d = z.size();
  const double n = p_norm(z, p);
  if (n == 0.0) return Mat::Identity(d, d);
  Vec v(d);
  Vec diag(d);
  for (Index i = 0; i < d; ++i) {
    const double u = std::abs(z[i]) / n;
    v[i] = u == 0.0 ? 0.0 : std::copysign(std::pow(u, p - 1.0), z[i]);
    if (u == 0.0) {
      diag[i] = p < 2.0 ? kCurvatureCap : (p == 2.0 ? 1.0 : 0.0);
    } else {
      diag[i] = std::min(kCurvatureCap, std::pow(u, p - 2.0));
    }
  }
  Mat h = (2.0 - p) * v * v.transpose();
  h.diagonal() += (p - 1.0) * diag;
  return h;
}

double entropy_value(const Vec& x) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) return kInf;
    if (x[i] > 0.0) s += x[i] * std::log(x[i]);
    s -= x[i];
  }
  return s;
}

double exp_sum_value(const Vec& s) { return s.array().exp().sum(); }

}  // namespace

DomainSpec DomainSpec::full(Index n) {
  DomainSpec d;
  d.kind = DomainKind::full_space;
  d.lower = Vec::Zero(n);
  d.interior_point = Vec::Zero(n);
  return d;
}

DomainSpec DomainSpec::open_orthant(Vec lower) {
  DomainSpec d;
  d.kind = DomainKind::open_positive_orthant;
  d.interior_point = lower.array() + 1.0;
  d.lower = std::move(lower);
  return d;
}

DomainSpec DomainSpec::closed_orthant(Vec lower) {
  DomainSpec d = open_orthant(std::move(lower));
  d.kind = DomainKind::closed_positive_orthant;
  return d;
}

bool DomainSpec::contains(const Vec& x) const {
  if (x.size() != dim() || !x.allFinite()) return false;
  switch (kind) {
    case DomainKind::full_space:
      return true;
    case DomainKind::open_positive_orthant:
      return (x.array() > lower.array()).all();
    case DomainKind::closed_positive_orthant:
      return (x.array() >= lower.array()).all();
  }
  return false;
}

bool DomainSpec::contains_interior(const Vec& x) const {
  if (x.size() != dim() || !x.allFinite()) return false;
  if (kind == DomainKind::full_space) return true;
  return (x.array() > lower.array()).all();
}

std::string DomainSpec::describe() const {
  switch (kind) {
    case DomainKind::full_space:
      return "full_space";
    case DomainKind::open_positive_orthant:
      return lower.isZero() ? "open_positive_orthant" : "open_positive_orthant(translated)";
    case DomainKind::closed_positive_orthant:
      return lower.isZero() ? "closed_positive_orthant" : "closed_positive_orthant(translated)";
  }
  return "unknown";
}

LegendreFunction LegendreFunction::euclidean(Index n) {
  if (n < 1) throw UsageError("euclidean: dimension must be >= 1");
  LegendreFunction f;
  f.kind_ = Kind::euclidean;
  f.name_ = "euclidean";
  f.dim_ = n;
  f.dom_f_ = DomainSpec::full(n);
  f.dom_fstar_ = DomainSpec::full(n);
  f.supercoercive_ = true;
  return f;
}

LegendreFunction LegendreFunction::quadratic_spd(const Mat& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw UsageError("quadratic_spd: M must be a non-empty square matrix");
  }
  if (!m.allFinite()) throw UsageError("quadratic_spd: M has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw UsageError("quadratic_spd: M is not symmetric");
  }
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw UsageError("quadratic_spd: M is not positive definite");
  }
  LegendreFunction f;
  f.kind_ = Kind::quadratic_spd;
  f.name_ = "quadratic_spd";
  f.dim_ = m.rows();
  f.dom_f_ = DomainSpec::full(f.dim_);
  f.dom_fstar_ = DomainSpec::full(f.dim_);
  f.supercoercive_ = true;
  f.m_ = sym;
  f.m_inv_ = sym.llt().solve(Mat::Identity(f.dim_, f.dim_));
  f.m_inv_ = 0.5 * (f.m_inv_ + f.m_inv_.transpose()).eval();
  return f;
}

LegendreFunction LegendreFunction::pnorm_energy(Index n, double p) {
  if (n < 1) throw UsageError("pnorm_energy: dimension must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw UnsupportedError("pnorm_energy: unsupported geometry, need 1 < p < inf");
  }
  LegendreFunction f;
  f.kind_ = Kind::pnorm_energy;
  f.name_ = "pnorm_energy";
  f.dim_ = n;
  f.dom_f_ = DomainSpec::full(n);
  f.dom_fstar_ = DomainSpec::full(n);
  f.supercoercive_ = true;
  f.p_ = p;
  return f;
}

LegendreFunction LegendreFunction::shannon_entropy(Index n) {
  if (n < 1) throw UsageError("shannon_entropy: dimension must be >= 1");
  LegendreFunction f;
  f.kind_ = Kind::shannon_entropy;
  f.name_ = "shannon_entropy";
  f.dim_ = n;
  f.dom_f_ = DomainSpec::closed_orthant(Vec::Zero(n));
  f.dom_fstar_ = DomainSpec::full(n);
  f.supercoercive_ = true;
  return f;
}

LegendreFunction LegendreFunction::exp_sum(Index n) {
  if (n < 1) throw UsageError("exp_sum: dimension must be >= 1");
  LegendreFunction f;
  f.kind_ = Kind::exp_sum;
  f.name_ = "exp_sum";
  f.dim_ = n;
  f.dom_f_ = DomainSpec::full(n);
  f.dom_fstar_ = DomainSpec::closed_orthant(Vec::Zero(n));
  f.supercoercive_ = false;  // bounded as x -> -oo
  return f;
}

std::string LegendreFunction::label() const {
  std::ostringstream os;
  os << name_;
  if (kind_ == Kind::pnorm_energy) os << "(p=" << p_ << ")";
  if (kind_ == Kind::quadratic_spd) os << "(n=" << dim_ << ")";
  return os.str();
}

LegendreFunction LegendreFunction::conjugate() const {
  switch (kind_) {
    case Kind::euclidean:
      return euclidean(dim_);
    case Kind::quadratic_spd:
      return quadratic_spd(m_inv_);
    case Kind::pnorm_energy:
      return pnorm_energy(dim_, conjugate_exponent(p_));
    case Kind::shannon_entropy:
      return exp_sum(dim_);
    case Kind::exp_sum:
      return shannon_entropy(dim_);
  }
  throw UnsupportedError("conjugate: unknown geometry");
}

double LegendreFunction::value(const Vec& x) const {
  switch (kind_) {
    case Kind::euclidean:
      return 0.5 * x.squaredNorm();
    case Kind::quadratic_spd:
      return 0.5 * x.dot(m_ * x);
    case Kind::pnorm_energy:
      return pnorm_value(x, p_);
    case Kind::shannon_entropy:
      return entropy_value(x);
    case Kind::exp_sum:
      return exp_sum_value(x);
  }
  return kInf;
}

Vec LegendreFunction::gradient(const Vec& x) const {
  switch (kind_) {
    case Kind::euclidean:
      return x;
    case Kind::quadratic_spd:
      return m_ * x;
    case Kind::pnorm_energy:
      return pnorm_gradient(x, p_);
    case Kind::shannon_entropy:
      return x.array().log();
    case Kind::exp_sum:
      return x.array().exp();
  }
  return x;
}

Mat LegendreFunction::hessian(const Vec& x) const {
  switch (kind_) {
    case Kind::euclidean:
      return Mat::Identity(dim_, dim_);
    case Kind::quadratic_spd:
      return m_;
    case Kind::pnorm_energy:
      return pnorm_hessian(x, p_);
    case Kind::shannon_entropy:
      return Vec(x.array().inverse()).asDiagonal();
    case Kind::exp_sum:
      return Vec(x.array().exp()).asDiagonal();
  }
  return Mat::Identity(dim_, dim_);
}

double LegendreFunction::conj_value(const Vec& s) const {
  switch (kind_) {
    case Kind::euclidean:
      return 0.5 * s.squaredNorm();
    case Kind::quadratic_spd:
      return 0.5 * s.dot(m_inv_ * s);
    case Kind::pnorm_energy:
      return pnorm_value(s, conjugate_exponent(p_));
    case Kind::shannon_entropy:
      return exp_sum_value(s);
    case Kind::exp_sum:
      return entropy_value(s);
  }
  return kInf;
}

Vec LegendreFunction::conj_gradient(const Vec& s) const {
  switch (kind_) {
    case Kind::euclidean:
      return s;
    case Kind::quadratic_spd:
      return m_inv_ * s;
    case Kind::pnorm_energy:
      return pnorm_gradient(s, conjugate_exponent(p_));
    case Kind::shannon_entropy:
      return s.array().exp();
    case Kind::exp_sum:
      return s.array().log();
  }
  return s;
}

namespace {

void check_dim(const LegendreFunction& f, Index n) {
  if (n != f.dim()) throw UsageError(f.name() + ": dimension mismatch");
}

}  // namespace

double eval_f(const LegendreFunction& f, const PrimalVector& x) {
  check_dim(f, x.dim());
  return f.value(x.coords());
}

DualVector grad_f(const LegendreFunction& f, const PrimalVector& x) {
  check_dim(f, x.dim());
  if (!f.dom_f().contains_interior(x.coords())) {
    throw DomainError(f.name() + ": gradient requested outside int dom f");
  }
  return DualVector(f.gradient(x.coords()));
}

double eval_conj(const LegendreFunction& f, const DualVector& xstar) {
  check_dim(f, xstar.dim());
  return f.conj_value(xstar.coords());
}

PrimalVector grad_conj(const LegendreFunction& f, const DualVector& xstar) {
  check_dim(f, xstar.dim());
  if (!f.dom_fstar().contains_interior(xstar.coords())) {
    throw DomainError(f.name() + ": conjugate gradient requested outside int dom f*");
  }
  return PrimalVector(f.conj_gradient(xstar.coords()));
}

double bregman(const LegendreFunction& f, const Vec& y, const Vec& x) {
  check_dim(f, y.size());
  check_dim(f, x.size());
  if (!f.dom_f().contains_interior(x)) return kInf;
  const double fy = f.value(y);
  if (!std::isfinite(fy)) return kInf;
  const double d = fy - f.value(x) - (y - x).dot(f.gradient(x));
  return std::max(0.0, d);
}

double bregman(const LegendreFunction& f, const PrimalVector& y, const PrimalVector& x) {
  return bregman(f, y.coords(), x.coords());
}

DualVector duality_map(double p, const PrimalVector& x) {
  const auto f = LegendreFunction::pnorm_energy(x.dim(), p);
  DualVector j(f.gradient(x.coords()));
  const double nx = p_norm(x, p);
  const double lhs = pair(x, j);
  const double rhs = p_norm(j, conjugate_exponent(p));
  const double scale = 1.0 + nx * nx;
  if (std::abs(lhs - nx * nx) > 1e-8 * scale || std::abs(rhs * rhs - nx * nx) > 1e-8 * scale) {
    throw std::logic_error("duality_map: norm identity violated");
  }
  return j;
}

}  // namespace moreau
