#include "moreau/convex.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace moreau {

namespace {

double slack(const Vec& x) { return kFeasibilityTol * (1.0 + x.cwiseAbs().maxCoeff()); }

Vec clamp(const Vec& x, const Vec& lo, const Vec& hi) { return x.cwiseMax(lo).cwiseMin(hi); }

void require_dim(Index expected, Index got, const char* what) {
  if (expected != got) throw UsageError(std::string(what) + ": dimension mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// ConeSpec

ConeSpec ConeSpec::nonneg_orthant(Index n) {
  if (n < 1) throw UsageError("nonneg_orthant: dimension must be >= 1");
  ConeSpec k;
  k.kind_ = Kind::nonneg_orthant;
  k.dim_ = n;
  return k;
}

ConeSpec ConeSpec::second_order(Index n) {
  if (n < 2) throw UnsupportedError("second_order: needs dimension >= 2");
  ConeSpec k;
  k.kind_ = Kind::second_order;
  k.dim_ = n;
  return k;
}

ConeSpec ConeSpec::subspace(const Mat& generators) {
  const Index n = generators.rows();
  if (n < 1) throw UsageError("subspace: dimension must be >= 1");
  ConeSpec k;
  k.kind_ = Kind::subspace;
  k.dim_ = n;
  if (generators.cols() == 0) {
    k.basis_ = Mat::Zero(n, 0);
    return k;
  }
  Eigen::ColPivHouseholderQR<Mat> qr(generators);
  const Index r = qr.rank();
  k.basis_ = Mat(qr.householderQ()).leftCols(r);
  return k;
}

ConeSpec ConeSpec::halfspace(const Vec& normal) {
  if (normal.size() < 1 || !(normal.norm() > 0.0)) {
    throw UsageError("halfspace: normal must be nonzero");
  }
  ConeSpec k;
  k.kind_ = Kind::halfspace;
  k.dim_ = normal.size();
  k.dir_ = normal;
  return k;
}

ConeSpec ConeSpec::ray(const Vec& direction) {
  if (direction.size() < 1 || !(direction.norm() > 0.0)) {
    throw UsageError("ray: direction must be nonzero");
  }
  ConeSpec k;
  k.kind_ = Kind::ray;
  k.dim_ = direction.size();
  k.dir_ = direction;
  return k;
}

std::string ConeSpec::name() const {
  switch (kind_) {
    case Kind::nonneg_orthant:
      return reflected_ ? "nonpos_orthant" : "nonneg_orthant";
    case Kind::second_order:
      return reflected_ ? "polar_second_order_cone" : "second_order_cone";
    case Kind::subspace:
      return "subspace";
    case Kind::halfspace:
      return "halfspace";
    case Kind::ray:
      return "ray";
  }
  return "cone";
}

ConeSpec ConeSpec::negated() const {
  switch (kind_) {
    case Kind::subspace:
      return *this;
    case Kind::halfspace:
      return halfspace(-dir_);
    case Kind::ray:
      return ray(-dir_);
    default: {
      ConeSpec k = *this;
      k.reflected_ = !reflected_;
      return k;
    }
  }
}

ConeSpec ConeSpec::polar() const {
  switch (kind_) {
    case Kind::nonneg_orthant:
    case Kind::second_order:
      // Both are self-dual, so K^- = -K* = -K.
      return negated();
    case Kind::subspace: {
      const Index n = dim_;
      const Index k = basis_.cols();
      if (k == 0) return subspace(Mat::Identity(n, n));
      if (k == n) return subspace(Mat::Zero(n, 0));
      Eigen::HouseholderQR<Mat> qr(basis_);
      Mat q = qr.householderQ();
      return subspace(q.rightCols(n - k));
    }
    case Kind::halfspace:
      return ray(dir_);
    case Kind::ray:
      return halfspace(dir_);
  }
  throw UnsupportedError("polar: unsupported cone kind");
}

Vec ConeSpec::project_unreflected(const Vec& x) const {
  switch (kind_) {
    case Kind::nonneg_orthant:
      return x.cwiseMax(0.0);
    case Kind::second_order: {
      const double t = x[0];
      const Vec u = x.tail(dim_ - 1);
      const double r = u.norm();
      if (r <= t) return x;
      if (r <= -t) return Vec::Zero(dim_);
      const double a = 0.5 * (t + r);
      Vec out(dim_);
      out[0] = a;
      out.tail(dim_ - 1) = (a / r) * u;
      return out;
    }
    case Kind::subspace:
      return basis_ * (basis_.transpose() * x);
    case Kind::halfspace: {
      const double s = dir_.dot(x);
      if (s <= 0.0) return x;
      return x - (s / dir_.squaredNorm()) * dir_;
    }
    case Kind::ray: {
      const double s = dir_.dot(x);
      if (s <= 0.0) return Vec::Zero(dim_);
      return (s / dir_.squaredNorm()) * dir_;
    }
  }
  throw UnsupportedError("project: unsupported cone kind");
}

Mat ConeSpec::jacobian_unreflected(const Vec& x) const {
  const Index n = dim_;
  switch (kind_) {
    case Kind::nonneg_orthant:
      return Vec((x.array() > 0.0).cast<double>()).asDiagonal();
    case Kind::second_order: {
      const double t = x[0];
      const Vec u = x.tail(n - 1);
      const double r = u.norm();
      if (r <= t) return Mat::Identity(n, n);
      if (r <= -t) return Mat::Zero(n, n);
      const Vec w = u / r;
      Mat j(n, n);
      j(0, 0) = 1.0;
      j.block(0, 1, 1, n - 1) = w.transpose();
      j.block(1, 0, n - 1, 1) = w;
      j.block(1, 1, n - 1, n - 1) =
          (1.0 + t / r) * Mat::Identity(n - 1, n - 1) - (t / r) * w * w.transpose();
      return 0.5 * j;
    }
    case Kind::subspace:
      return basis_ * basis_.transpose();
    case Kind::halfspace:
      if (dir_.dot(x) <= 0.0) return Mat::Identity(n, n);
      return Mat::Identity(n, n) - dir_ * dir_.transpose() / dir_.squaredNorm();
    case Kind::ray:
      if (dir_.dot(x) <= 0.0) return Mat::Zero(n, n);
      return dir_ * dir_.transpose() / dir_.squaredNorm();
  }
  throw UnsupportedError("project_jacobian: unsupported cone kind");
}

Vec ConeSpec::project(const Vec& x) const {
  require_dim(dim_, x.size(), "cone projection");
  if (reflected_) return -project_unreflected(-x);
  return project_unreflected(x);
}

Mat ConeSpec::project_jacobian(const Vec& x) const {
  require_dim(dim_, x.size(), "cone projection");
  if (reflected_) return jacobian_unreflected(-x);
  return jacobian_unreflected(x);
}

bool ConeSpec::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  return (x - project(x)).cwiseAbs().maxCoeff() <= tol * (1.0 + x.cwiseAbs().maxCoeff());
}

std::string PhiDomain::describe() const {
  switch (kind) {
    case Kind::full_space:
      return "full_space";
    case Kind::cone:
      return "cone:" + cone->name();
    case Kind::box:
      return "box";
    case Kind::point:
      return "point";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ConvexFunction

ConvexFunction ConvexFunction::zero(Index n) {
  if (n < 1) throw UsageError("zero: dimension must be >= 1");
  ConvexFunction f;
  f.kind_ = Kind::zero;
  f.dim_ = n;
  f.bounded_below_ = true;
  return f;
}

ConvexFunction ConvexFunction::linear(const Vec& c) {
  if (c.size() < 1 || !c.allFinite()) throw UsageError("linear: invalid coefficient");
  ConvexFunction f;
  f.kind_ = Kind::linear;
  f.dim_ = c.size();
  f.c_ = c;
  f.bounded_below_ = c.isZero(0.0);
  return f;
}

ConvexFunction ConvexFunction::l1(Index n, double lambda) {
  if (n < 1) throw UsageError("l1: dimension must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("l1: lambda must be > 0");
  ConvexFunction f;
  f.kind_ = Kind::l1;
  f.dim_ = n;
  f.lambda_ = lambda;
  f.bounded_below_ = true;
  return f;
}

ConvexFunction ConvexFunction::box(const Vec& lo, const Vec& hi) {
  if (lo.size() < 1 || lo.size() != hi.size() || !lo.allFinite() || !hi.allFinite() ||
      (lo.array() > hi.array()).any()) {
    throw UsageError("box: need finite bounds with lo <= hi");
  }
  ConvexFunction f;
  f.kind_ = Kind::box;
  f.dim_ = lo.size();
  f.lo_ = lo;
  f.hi_ = hi;
  f.bounded_below_ = true;
  f.domain_.kind = PhiDomain::Kind::box;
  f.domain_.lo = lo;
  f.domain_.hi = hi;
  return f;
}

ConvexFunction ConvexFunction::box_support(const Vec& lo, const Vec& hi) {
  ConvexFunction f = box(lo, hi);
  f.kind_ = Kind::box_support;
  f.domain_ = PhiDomain{};
  f.bounded_below_ = (lo.array() <= 0.0).all() && (hi.array() >= 0.0).all();
  return f;
}

ConvexFunction ConvexFunction::singleton(const Vec& c) {
  if (c.size() < 1 || !c.allFinite()) throw UsageError("singleton: invalid point");
  ConvexFunction f;
  f.kind_ = Kind::singleton;
  f.dim_ = c.size();
  f.c_ = c;
  f.bounded_below_ = true;
  f.domain_.kind = PhiDomain::Kind::point;
  f.domain_.point = c;
  return f;
}

ConvexFunction ConvexFunction::indicator(const ConeSpec& cone) {
  ConvexFunction f;
  f.kind_ = Kind::cone_indicator;
  f.dim_ = cone.dim();
  f.bounded_below_ = true;
  f.domain_.kind = PhiDomain::Kind::cone;
  f.domain_.cone = cone;
  return f;
}

ConvexFunction ConvexFunction::quadratic(const Mat& q, const Vec& c, double offset) {
  const Index n = q.rows();
  if (n < 1 || q.cols() != n || c.size() != n || !q.allFinite() || !c.allFinite()) {
    throw UsageError("quadratic: Q must be square and match c");
  }
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw UsageError("quadratic: Q is not symmetric");
  }
  const Mat sym = 0.5 * (q + q.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  const Vec& ev = eig.eigenvalues();
  const double cut = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -cut) throw UsageError("quadratic: Q is not positive semidefinite");

  ConvexFunction f;
  f.kind_ = Kind::quadratic;
  f.dim_ = n;
  f.q_ = sym;
  f.c_ = c;
  f.offset_ = offset;
  Vec inv = Vec::Zero(n);
  Vec on_range = Vec::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (ev[i] > cut) {
      inv[i] = 1.0 / ev[i];
      on_range[i] = 1.0;
    }
  }
  const Mat& v = eig.eigenvectors();
  f.q_pinv_ = v * inv.asDiagonal() * v.transpose();
  f.q_range_ = v * on_range.asDiagonal() * v.transpose();
  f.bounded_below_ = (c - f.q_range_ * c).norm() <= 1e-10 * (1.0 + c.norm());
  return f;
}

std::string ConvexFunction::name() const {
  switch (kind_) {
    case Kind::zero:
      return "zero";
    case Kind::linear:
      return "linear";
    case Kind::l1:
      return "l1";
    case Kind::box:
      return "box";
    case Kind::box_support:
      return "box_support";
    case Kind::singleton:
      return "singleton";
    case Kind::cone_indicator:
      return domain_.cone->name();
    case Kind::quadratic:
      return "quadratic";
  }
  return "unknown";
}

std::string ConvexFunction::label() const {
  std::ostringstream os;
  os << name();
  if (kind_ == Kind::l1) os << "(lambda=" << lambda_ << ")";
  return os.str();
}

ConvexFunction ConvexFunction::conjugate() const {
  switch (kind_) {
    case Kind::zero:
      return singleton(Vec::Zero(dim_));
    case Kind::linear:
      return singleton(c_);
    case Kind::l1:
      return box(Vec::Constant(dim_, -lambda_), Vec::Constant(dim_, lambda_));
    case Kind::box:
      return box_support(lo_, hi_);
    case Kind::box_support:
      return box(lo_, hi_);
    case Kind::singleton:
      return linear(c_);
    case Kind::cone_indicator:
      return indicator(domain_.cone->polar());
    case Kind::quadratic: {
      if (q_range_.diagonal().sum() < static_cast<double>(dim_) - 0.5) {
        throw UnsupportedError("quadratic: conjugate entry needs positive definite Q");
      }
      const Vec qc = q_pinv_ * c_;
      return quadratic(q_pinv_, -qc, 0.5 * c_.dot(qc) - offset_);
    }
  }
  throw UnsupportedError("conjugate: unknown entry");
}

double ConvexFunction::value(const Vec& x) const {
  require_dim(dim_, x.size(), "phi");
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::linear:
      return c_.dot(x);
    case Kind::l1:
      return lambda_ * x.lpNorm<1>();
    case Kind::box:
      return (x - clamp(x, lo_, hi_)).cwiseAbs().maxCoeff() <= slack(x) ? 0.0 : kInf;
    case Kind::box_support: {
      double s = 0.0;
      for (Index i = 0; i < dim_; ++i) s += std::max(lo_[i] * x[i], hi_[i] * x[i]);
      return s;
    }
    case Kind::singleton:
      return (x - c_).cwiseAbs().maxCoeff() <= slack(x) ? 0.0 : kInf;
    case Kind::cone_indicator:
      return domain_.cone->contains(x) ? 0.0 : kInf;
    case Kind::quadratic:
      return 0.5 * x.dot(q_ * x) + c_.dot(x) + offset_;
  }
  return kInf;
}

double ConvexFunction::conjugate_value(const Vec& s) const {
  require_dim(dim_, s.size(), "phi*");
  switch (kind_) {
    case Kind::quadratic: {
      const Vec r = s - c_;
      if ((r - q_range_ * r).cwiseAbs().maxCoeff() > slack(r)) return kInf;
      return 0.5 * r.dot(q_pinv_ * r) - offset_;
    }
    default:
      return conjugate().value(s);
  }
}

Vec ConvexFunction::prox(const Vec& x, double gamma) const {
  require_dim(dim_, x.size(), "prox");
  if (!(gamma > 0.0)) throw UsageError("prox: gamma must be > 0");
  switch (kind_) {
    case Kind::zero:
      return x;
    case Kind::linear:
      return x - gamma * c_;
    case Kind::l1: {
      const double t = gamma * lambda_;
      Vec out(dim_);
      for (Index i = 0; i < dim_; ++i) {
        const double a = std::abs(x[i]) - t;
        out[i] = a > 0.0 ? std::copysign(a, x[i]) : 0.0;
      }
      return out;
    }
    case Kind::box:
      return clamp(x, lo_, hi_);
    case Kind::box_support:
      return x - gamma * clamp(x / gamma, lo_, hi_);
    case Kind::singleton:
      return c_;
    case Kind::cone_indicator:
      return domain_.cone->project(x);
    case Kind::quadratic: {
      const Mat a = Mat::Identity(dim_, dim_) + gamma * q_;
      return a.ldlt().solve(x - gamma * c_);
    }
  }
  return x;
}

Mat ConvexFunction::prox_jacobian(const Vec& x, double gamma) const {
  require_dim(dim_, x.size(), "prox");
  const Mat id = Mat::Identity(dim_, dim_);
  switch (kind_) {
    case Kind::zero:
    case Kind::linear:
      return id;
    case Kind::l1:
      return Vec((x.array().abs() > gamma * lambda_).cast<double>()).asDiagonal();
    case Kind::box:
      return Vec(((x.array() > lo_.array()) && (x.array() < hi_.array())).cast<double>())
          .asDiagonal();
    case Kind::box_support: {
      const Vec y = x / gamma;
      return id - Mat(Vec(((y.array() > lo_.array()) && (y.array() < hi_.array()))
                              .cast<double>())
                          .asDiagonal());
    }
    case Kind::singleton:
      return Mat::Zero(dim_, dim_);
    case Kind::cone_indicator:
      return domain_.cone->project_jacobian(x);
    case Kind::quadratic:
      return (id + gamma * q_).ldlt().solve(id);
  }
  return id;
}

Vec ConvexFunction::prox_step(const Vec& y, const Vec& u, double gamma) const {
  require_dim(dim_, y.size(), "prox");
  require_dim(dim_, u.size(), "prox");
  const Vec w = y + u;
  switch (kind_) {
    case Kind::zero:
      return u;
    case Kind::linear:
      return u - gamma * c_;
    case Kind::l1: {
      const double t = gamma * lambda_;
      Vec out(dim_);
      for (Index i = 0; i < dim_; ++i) {
        out[i] = std::abs(w[i]) > t ? u[i] - std::copysign(t, w[i]) : -y[i];
      }
      return out;
    }
    case Kind::box: {
      Vec out(dim_);
      for (Index i = 0; i < dim_; ++i) {
        if (w[i] > lo_[i] && w[i] < hi_[i]) {
          out[i] = u[i];
        } else {
          out[i] = (w[i] <= lo_[i] ? lo_[i] : hi_[i]) - y[i];
        }
      }
      return out;
    }
    case Kind::box_support:
      return u - gamma * clamp(w / gamma, lo_, hi_);
    case Kind::singleton:
      return c_ - y;
    case Kind::cone_indicator: {
      const ConeSpec& k = *domain_.cone;
      if (k.kind() == ConeSpec::Kind::nonneg_orthant) {
        const double sign = k.reflected() ? -1.0 : 1.0;
        Vec out(dim_);
        for (Index i = 0; i < dim_; ++i) out[i] = sign * w[i] > 0.0 ? u[i] : -y[i];
        return out;
      }
      // Inside the cone the projection is the identity.
      if (k.contains(w, 0.0)) return u;
      return k.project(w) - y;
    }
    case Kind::quadratic: {
      const Mat a = Mat::Identity(dim_, dim_) + gamma * q_;
      return a.ldlt().solve(u - gamma * c_ - gamma * (q_ * y));
    }
  }
  return prox(w, gamma) - y;
}

// ---------------------------------------------------------------------------

double eval_phi(const ConvexFunction& phi, const PrimalVector& x) { return phi.value(x.coords()); }

double eval_conj_phi(const ConvexFunction& phi, const DualVector& xstar) {
  return phi.conjugate_value(xstar.coords());
}

PrimalVector euclid_prox(const ConvexFunction& phi, const PrimalVector& x, double gamma) {
  return PrimalVector(phi.prox(x.coords(), gamma));
}

double fenchel_young_gap(const ConvexFunction& phi, const Vec& x, const Vec& xstar, double tol) {
  const double a = phi.value(x);
  if (!std::isfinite(a)) return kInf;
  const double b = phi.conjugate_value(xstar);
  if (!std::isfinite(b)) return kInf;
  const double p = x.dot(xstar);
  const double g = a + b - p;
  if (g >= 0.0) return g;
  if (g >= -tol * (1.0 + std::abs(p))) return 0.0;
  // Fenchel-Young violated beyond rounding: report the magnitude.
  return -g;
}

double fenchel_young_gap(const ConvexFunction& phi, const PrimalVector& x, const DualVector& xstar,
                         double tol) {
  return fenchel_young_gap(phi, x.coords(), xstar.coords(), tol);
}

PrimalVector polar_project(const ConeSpec& cone, const PrimalVector& x) {
  return PrimalVector(cone.polar().project(x.coords()));
}

}  // namespace moreau
