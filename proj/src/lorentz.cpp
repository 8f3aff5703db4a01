#include "horocvx/lorentz.hpp"

#include <cmath>

#include "horocvx/util.hpp"

namespace horocvx {

LorentzVec LorentzVec::make(int n, const Dir& spatial, double height) {
  LorentzVec v;
  v.n = n;
  for (int i = 0; i <= n; ++i) v.x[i] = spatial[i];
  v.h = height;
  return v;
}

LorentzVec operator+(const LorentzVec& a, const LorentzVec& b) {
  LorentzVec r = a;
  for (int i = 0; i <= a.n; ++i) r.x[i] += b.x[i];
  r.h += b.h;
  return r;
}

LorentzVec operator-(const LorentzVec& a, const LorentzVec& b) {
  LorentzVec r = a;
  for (int i = 0; i <= a.n; ++i) r.x[i] -= b.x[i];
  r.h -= b.h;
  return r;
}

LorentzVec operator*(double s, const LorentzVec& a) {
  LorentzVec r = a;
  for (int i = 0; i <= a.n; ++i) r.x[i] *= s;
  r.h *= s;
  return r;
}

double inner(const LorentzVec& a, const LorentzVec& b) {
  if (a.n != b.n) throw InvalidArgument("Lorentz vectors of different dimension");
  double s = 0;
  for (int i = 0; i <= a.n; ++i) s += a.x[i] * b.x[i];
  return s - a.h * b.h;
}

double spatial_dot(const LorentzVec& a, const Dir& z) {
  double s = 0;
  for (int i = 0; i <= a.n; ++i) s += a.x[i] * z[i];
  return s;
}

HPoint origin(int n) { return LorentzVec::make(n, {0, 0, 0}, 1.0); }

HPoint radial_point(int n, const Dir& dir, double s) {
  Dir d{};
  for (int i = 0; i <= n; ++i) d[i] = std::sinh(s) * dir[i];
  return LorentzVec::make(n, d, std::cosh(s));
}

bool is_hpoint(const LorentzVec& X, double tol) {
  double q = inner(X, X);
  return std::abs(q + 1.0) <= tol * std::max(1.0, X.h * X.h) && X.h >= 1.0 - tol;
}

void validate_hpoint(const LorentzVec& X, double tol) {
  if (!is_hpoint(X, tol)) throw DomainError("point is not on the hyperboloid");
}

double geodesic_distance(const HPoint& X, const HPoint& Y) {
  validate_hpoint(X, 1e-9);
  validate_hpoint(Y, 1e-9);
  double c = -inner(X, Y);
  double scale = std::max(1.0, X.h * Y.h);
  if (c < 1.0) {
    if (1.0 - c > 1e-8 * scale) throw DomainError("arccosh argument below 1");
    c = 1.0;
  }
  return std::acosh(c);
}

bool is_future_timelike(const LorentzVec& T) { return T.h > 0 && inner(T, T) < 0; }

double minkowski_norm(const LorentzVec& T) {
  if (!is_future_timelike(T)) throw DomainError("vector is not future time-like");
  return std::sqrt(-inner(T, T));
}

HPoint normalize_to_hyperboloid(const LorentzVec& T) { return (1.0 / minkowski_norm(T)) * T; }

Eigen::MatrixXd lorentz_form(int n) {
  Eigen::MatrixXd eta = Eigen::MatrixXd::Identity(n + 2, n + 2);
  eta(n + 1, n + 1) = -1.0;
  return eta;
}

bool is_isometry(const Isometry& f, double tol) {
  if (f.rows() != f.cols() || f.rows() < 3 || f.rows() > 4) return false;
  int n = static_cast<int>(f.rows()) - 2;
  Eigen::MatrixXd eta = lorentz_form(n);
  if ((f.transpose() * eta * f - eta).cwiseAbs().maxCoeff() > tol * std::max(1.0, f.squaredNorm())) return false;
  return f(n + 1, n + 1) > 0;  // preserves the future cone
}

Isometry boost(int n, int axis, double rapidity) {
  Isometry f = Eigen::MatrixXd::Identity(n + 2, n + 2);
  f(axis, axis) = std::cosh(rapidity);
  f(axis, n + 1) = std::sinh(rapidity);
  f(n + 1, axis) = std::sinh(rapidity);
  f(n + 1, n + 1) = std::cosh(rapidity);
  return f;
}

Isometry rotation(int n, int a, int b, double angle) {
  Isometry f = Eigen::MatrixXd::Identity(n + 2, n + 2);
  f(a, a) = std::cos(angle);
  f(a, b) = -std::sin(angle);
  f(b, a) = std::sin(angle);
  f(b, b) = std::cos(angle);
  return f;
}

LorentzVec apply_linear(const Eigen::MatrixXd& f, const LorentzVec& X) {
  int d = X.dim();
  if (f.rows() != d || f.cols() != d) throw InvalidArgument("transform size does not match dimension");
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = X[i];
  Eigen::VectorXd w = f * v;
  LorentzVec r;
  r.n = X.n;
  for (int i = 0; i < d; ++i) r[i] = w(i);
  return r;
}

HPoint apply_isometry(const Isometry& f, const HPoint& X) {
  if (!is_isometry(f)) throw InvalidArgument("transform is not a Lorentz isometry");
  validate_hpoint(X);
  HPoint Y = apply_linear(f, X);
  validate_hpoint(Y, 1e-9);
  return Y;
}

}  // namespace horocvx
