#include "horocvx/hconvex.hpp"

#include <algorithm>
#include <cmath>

#include "horocvx/util.hpp"

namespace horocvx {

namespace {

double grad_sq(int n, const Vec2& g) { return n == 1 ? g.a * g.a : g.a * g.a + g.b * g.b; }

}  // namespace

SupportField make_field(GridPtr grid, ScalarField phi) {
  if (!grid) throw InvalidArgument("missing grid");
  check_size(*grid, phi);
  for (double v : phi) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("support field must be positive and finite");
  }
  return SupportField{std::move(grid), std::move(phi)};
}

void require_same_grid(const SupportField& a, const SupportField& b) {
  if (!a.grid->same_as(*b.grid)) throw InvalidArgument("fields live on different grids");
}

SupportField support_of_point(GridPtr grid, const HPoint& X) {
  if (X.n != grid->n()) throw InvalidArgument("point dimension does not match grid");
  validate_hpoint(X);
  ScalarField phi = sample(*grid, [&](const Dir& z) { return X.h - spatial_dot(X, z); });
  return make_field(std::move(grid), std::move(phi));
}

SupportField support_of_ball(GridPtr grid, const HPoint& X, double r) {
  if (r < 0) throw InvalidArgument("ball radius must be nonnegative");
  SupportField K = support_of_point(std::move(grid), X);
  double e = std::exp(r);
  for (double& v : K.phi) v *= e;
  return K;
}

Sym2 a_pointwise(int n, double phi, const Vec2& g, const Sym2& H) {
  double shift = -0.5 * grad_sq(n, g) / phi + 0.5 * (phi - 1.0 / phi);
  Sym2 A = H;
  A.xx += shift;
  if (n == 2) A.yy += shift;
  else A.xy = A.yy = 0.0;
  return A;
}

std::array<double, 2> eigenvalues(int n, const Sym2& s) {
  if (n == 1) return {s.xx, s.xx};
  double m = 0.5 * (s.xx + s.yy);
  double d = std::hypot(0.5 * (s.xx - s.yy), s.xy);
  return {m - d, m + d};
}

double det(int n, const Sym2& s) { return n == 1 ? s.xx : s.xx * s.yy - s.xy * s.xy; }
double trace(int n, const Sym2& s) { return n == 1 ? s.xx : s.xx + s.yy; }

double sigma_elem(int n, int m, const Sym2& s) {
  if (m == 0) return 1.0;
  if (m == 1) return trace(n, s);
  if (m == 2 && n == 2) return det(n, s);
  return 0.0;
}

double p_elem(int n, int m, const Sym2& s) { return sigma_elem(n, m, s) / binomial(n, m); }

double sigma_elem(int n, int m, const std::array<double, 2>& l) {
  if (m == 0) return 1.0;
  if (n == 1) return m == 1 ? l[0] : 0.0;
  if (m == 1) return l[0] + l[1];
  if (m == 2) return l[0] * l[1];
  return 0.0;
}

double p_elem(int n, int m, const std::array<double, 2>& l) { return sigma_elem(n, m, l) / binomial(n, m); }

FieldGeometry analyze(const SupportField& K) {
  FieldGeometry geo;
  const int n = K.n();
  K.grid->derivatives(K.phi, &geo.grad, &geo.hess);
  const std::size_t N = K.size();
  geo.A.a.resize(N);
  geo.A.min_eig.resize(N);
  geo.A.max_eig.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    geo.A.a[i] = a_pointwise(n, K.phi[i], geo.grad[i], geo.hess[i]);
    auto e = eigenvalues(n, geo.A.a[i]);
    geo.A.min_eig[i] = e[0];
    geo.A.max_eig[i] = e[1];
  }
  return geo;
}

ATensorField a_tensor(const SupportField& K) { return analyze(K).A; }

std::string to_string(Convexity c) {
  switch (c) {
    case Convexity::Uniform: return "uniformly-h-convex";
    case Convexity::Weak: return "h-convex";
    default: return "not-h-convex";
  }
}

double default_convexity_tol(const SupportField& K) {
  return 1e-8 * (1.0 + *std::max_element(K.phi.begin(), K.phi.end()));
}

ConvexityReport convexity(const SupportField& K, double tol) {
  if (tol < 0) throw InvalidArgument("tolerance must be nonnegative");
  ATensorField A = a_tensor(K);
  ConvexityReport rep;
  auto it = std::min_element(A.min_eig.begin(), A.min_eig.end());
  rep.min_eig = *it;
  rep.worst_node = static_cast<std::size_t>(it - A.min_eig.begin());
  if (rep.min_eig > tol) rep.cls = Convexity::Uniform;
  else if (rep.min_eig >= -tol) rep.cls = Convexity::Weak;
  else rep.cls = Convexity::Not;
  return rep;
}

ConvexityReport convexity(const SupportField& K) { return convexity(K, default_convexity_tol(K)); }

double coshr_pointwise(int n, double phi, const Vec2& g) {
  return 0.5 * grad_sq(n, g) / phi + 0.5 * (phi + 1.0 / phi);
}

BoundaryData boundary_data(const SupportField& K) { return boundary_data(K, analyze(K)); }

BoundaryData boundary_data(const SupportField& K, const FieldGeometry& geo) {
  const int n = K.n();
  double tol = default_convexity_tol(K);
  double mn = *std::min_element(geo.A.min_eig.begin(), geo.A.min_eig.end());
  if (mn < -tol) throw DomainError("field is not h-convex");
  const std::size_t N = K.size();
  BoundaryData bd;
  bd.X.resize(N);
  bd.nu.resize(N);
  bd.coshr.resize(N);
  bd.u_tilde.resize(N);
  bd.lambda_tilde.resize(N);
  bd.area_density.resize(N);
  const Grid& g = *K.grid;
  for (std::size_t i = 0; i < N; ++i) {
    double phi = K.phi[i];
    const Dir& z = g.nodes()[i];
    Dir dphi = ambient_gradient(g, i, geo.grad[i]);
    double gs = grad_sq(n, geo.grad[i]);
    double cx = 0.5 * (gs / phi + 1.0 / phi);
    double cn = 0.5 * (gs / phi - 1.0 / phi);
    LorentzVec X, nu;
    X.n = nu.n = n;
    for (int a = 0; a <= n; ++a) {
      X.x[a] = -0.5 * phi * z[a] + cx * z[a] - dphi[a];
      nu.x[a] = -0.5 * phi * z[a] + cn * z[a] - dphi[a];
    }
    X.h = 0.5 * phi + cx;
    nu.h = 0.5 * phi + cn;
    bd.X[i] = X;
    bd.nu[i] = nu;
    bd.coshr[i] = coshr_pointwise(n, phi, geo.grad[i]);
    bd.u_tilde[i] = bd.coshr[i] - 1.0 / phi;
    bd.lambda_tilde[i] = {phi * geo.A.min_eig[i], phi * geo.A.max_eig[i]};
    bd.area_density[i] = det(n, geo.A.a[i]);
  }
  return bd;
}

double max_grad_ratio(const SupportField& K, const FieldGeometry& geo) {
  double m = 0;
  for (std::size_t i = 0; i < K.size(); ++i) m = std::max(m, std::sqrt(grad_sq(K.n(), geo.grad[i])) / K.phi[i]);
  return m;
}

SupportField apply_isometry_field(const SupportField& K, const Isometry& f) {
  if (!is_isometry(f)) throw InvalidArgument("transform is not a Lorentz isometry");
  const int n = K.n();
  if (f.rows() != n + 2) throw InvalidArgument("transform size does not match dimension");
  Eigen::MatrixXd finv = lorentz_form(n) * f.transpose() * lorentz_form(n);
  const Grid& g = *K.grid;
  std::vector<Dir> pre(K.size());
  std::vector<double> chi(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) {
    LorentzVec light = LorentzVec::make(n, g.nodes()[i], 1.0);
    LorentzVec v = apply_linear(finv, light);
    chi[i] = v.h;
    Dir z{0, 0, 0};
    double nrm = 0;
    for (int a = 0; a <= n; ++a) {
      z[a] = v.x[a] / v.h;
      nrm += z[a] * z[a];
    }
    nrm = std::sqrt(nrm);
    for (int a = 0; a <= n; ++a) z[a] /= nrm;
    pre[i] = z;
  }
  std::vector<double> vals = g.resample(K.phi, pre);
  ScalarField out(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) out[i] = chi[i] * vals[i];
  return make_field(K.grid, std::move(out));
}

}  // namespace horocvx
