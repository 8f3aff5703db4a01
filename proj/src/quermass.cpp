#include "horocvx/quermass.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "horocvx/util.hpp"

namespace horocvx {

Rule01 gauss_legendre_01(int order) {
  if (order < 1) throw InvalidArgument("quadrature order must be positive");
  gsl_integration_glfixed_table* tab = gsl_integration_glfixed_table_alloc(order);
  Rule01 r;
  r.t.resize(order);
  r.w.resize(order);
  for (int i = 0; i < order; ++i) gsl_integration_glfixed_point(0.0, 1.0, i, &r.t[i], &r.w[i], tab);
  gsl_integration_glfixed_table_free(tab);
  return r;
}

double exp_sinh_integral(double a, int b, double rho) {
  if (rho == 0.0) return 0.0;
  auto f = [&](double t) { return std::exp(a * t) * std::pow(std::sinh(t), b); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, rho, 8, 1e-14);
}

double I_k(int n, int k, double r) {
  if (k < 0 || k > n) throw InvalidArgument("I_k requires 0 <= k <= n");
  if (r < 0) throw InvalidArgument("I_k requires r >= 0");
  double om = sphere_area(n);
  if (k == n) return om / n * (1.0 - std::exp(-n * r));
  return om * exp_sinh_integral(-double(k), n - k, r);
}

double I_k_sup(int n, int k) {
  if (k == n) return sphere_area(n) / n;
  if (n - 2 * k < 0) {
    auto f = [&](double t) { return std::pow(std::sinh(t), n - k) * std::exp(-k * t); };
    return sphere_area(n) *
           boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
               f, 0.0, std::numeric_limits<double>::infinity(), 10, 1e-13);
  }
  return std::numeric_limits<double>::infinity();
}

double I_k_inverse(int n, int k, double w) {
  if (w < 0 || w >= I_k_sup(n, k)) throw DomainError("I_k inverse argument out of range");
  if (w == 0) return 0.0;
  if (k == n) return -std::log(1.0 - n * w / sphere_area(n)) / n;
  // Bracket by doubling, bisect to a good start, then Newton.
  double hi = 1.0;
  while (I_k(n, k, hi) < w) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 30; ++i) {
    double mid = 0.5 * (lo + hi);
    (I_k(n, k, mid) < w ? lo : hi) = mid;
  }
  const double om = sphere_area(n);
  auto fn = [&](double r) {
    double v = I_k(n, k, r) - w;
    double d = om * std::pow(std::sinh(r), n - k) * std::exp(-k * r);
    return std::make_pair(v, d);
  };
  std::uintmax_t iters = 50;
  return boost::math::tools::newton_raphson_iterate(fn, 0.5 * (lo + hi), lo, hi, 50, iters);
}

CurvatureDensities curvature_densities(const SupportField& K) {
  const int n = K.n();
  FieldGeometry geo = analyze(K);
  CurvatureDensities d;
  const std::size_t N = K.size();
  d.phi = K.phi;
  d.coshr.resize(N);
  d.u_tilde.resize(N);
  d.pA.resize(N);
  d.sA.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    d.coshr[i] = coshr_pointwise(n, K.phi[i], geo.grad[i]);
    d.u_tilde[i] = d.coshr[i] - 1.0 / K.phi[i];
    for (int j = 0; j <= n; ++j) {
      d.pA[i][j] = p_elem(n, j, geo.A.a[i]);
      d.sA[i][j] = sigma_elem(n, j, geo.A.a[i]);
    }
  }
  return d;
}

double curvature_integral(const SupportField& K, int m) {
  const int n = K.n();
  if (m < 0 || m > n) throw InvalidArgument("curvature index out of range");
  if (convexity(K).cls == Convexity::Not) throw DomainError("field is not h-convex");
  CurvatureDensities d = curvature_densities(K);
  ScalarField f(K.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(d.phi[i], -m) * d.pA[i][n - m];
  return K.grid->integrate(f);
}

double quermass_closed_n(const SupportField& K) {
  const int n = K.n();
  ScalarField f(K.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = (1.0 - std::pow(K.phi[i], -n)) / n;
  return K.grid->integrate(f);
}

namespace {

double homotopy_value(const SupportField& K, const FieldGeometry& geo, int k, int order) {
  const int n = K.n();
  Rule01 rule = gauss_legendre_01(order);
  const double tol = -default_convexity_tol(K);
  KahanSum outer;
  ScalarField f(K.size());
  for (int q = 0; q < order; ++q) {
    double t = rule.t[q];
    for (std::size_t i = 0; i < K.size(); ++i) {
      double phi = K.phi[i];
      double pt = 1.0 - t + t * phi;
      Vec2 g{t * geo.grad[i].a, t * geo.grad[i].b};
      Sym2 H{t * geo.hess[i].xx, t * geo.hess[i].xy, t * geo.hess[i].yy};
      Sym2 A = a_pointwise(n, pt, g, H);
      if (eigenvalues(n, A)[0] < tol) throw DomainError("homotopy left the h-convex class");
      f[i] = (phi - 1.0) / pt * std::pow(pt, -k) * p_elem(n, n - k, A);
    }
    outer.add(rule.w[q] * K.grid->integrate(f));
  }
  return outer.value();
}

}  // namespace

QuermassReport modified_quermass_homotopy(const SupportField& K, int k, int order) {
  const int n = K.n();
  if (k < 0 || k > n) throw InvalidArgument("quermass index out of range");
  if (convexity(K).cls == Convexity::Not) throw DomainError("field is not h-convex");
  FieldGeometry geo = analyze(K);
  const double closed = quermass_closed_n(K);
  int ord = order;
  double diff = 0;
  for (;;) {
    diff = std::abs(homotopy_value(K, geo, n, ord) - closed);
    if (diff <= 1e-9 * std::max(1.0, std::abs(closed)) || ord >= 1024) break;
    ord *= 2;
  }
  QuermassReport rep;
  rep.k = k;
  rep.method = "homotopy";
  rep.order = ord;
  rep.value = homotopy_value(K, geo, k, ord);
  rep.est_error = std::max(diff, std::abs(rep.value - homotopy_value(K, geo, k, ord / 2)));
  return rep;
}

QuermassReport modified_quermass(const SupportField& K, int k) {
  const int n = K.n();
  if (k == n) {
    if (convexity(K).cls == Convexity::Not) throw DomainError("field is not h-convex");
    QuermassReport rep;
    rep.k = k;
    rep.method = "closed-form-k=n";
    rep.value = quermass_closed_n(K);
    return rep;
  }
  return modified_quermass_homotopy(K, k);
}

double k_mean_radius(const SupportField& K, int k) {
  double w = modified_quermass(K, k).value;
  if (w < 0 && w > -1e-12) w = 0;
  return I_k_inverse(K.n(), k, w);
}

double weighted_volume(const SupportField& K) {
  const int n = K.n();
  if (convexity(K).cls == Convexity::Not) throw DomainError("field is not h-convex");
  CurvatureDensities d = curvature_densities(K);
  ScalarField f(K.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = d.u_tilde[i] * d.pA[i][n];
  return K.grid->integrate(f) / (n + 1);
}

double S_functional(const SupportField& K) {
  const int n = K.n();
  return std::pow((n + 1) / sphere_area(n) * weighted_volume(K), 1.0 / (n + 1));
}

namespace {

SupportField scaled(const SupportField& K, double rho) {
  ScalarField phi = K.phi;
  for (double& v : phi) v *= std::exp(rho);
  return make_field(K.grid, std::move(phi));
}

double quermass_for_steiner(const SupportField& K, int k) {
  if (k == K.n()) return quermass_closed_n(K);
  return modified_quermass_homotopy(K, k).value;
}

}  // namespace

SteinerResult steiner_check(const SupportField& K, double rho) {
  const int n = K.n();
  if (rho < 0) throw InvalidArgument("rho must be nonnegative");
  if (convexity(K).cls != Convexity::Uniform) throw DomainError("Steiner check requires uniform h-convexity");
  SupportField Kr = scaled(K, rho);
  std::vector<double> curv(n + 1);
  for (int i = 0; i <= n; ++i) curv[i] = curvature_integral(K, i);
  SteinerResult res;
  res.residual.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    double lhs = rho == 0.0 ? 0.0 : quermass_for_steiner(Kr, k) - quermass_for_steiner(K, k);
    double rhs = 0;
    for (int i = k; i <= n; ++i) rhs += binomial(n - k, i - k) * curv[i] * exp_sinh_integral(n - k - i, i - k, rho);
    res.residual[k] = std::abs(lhs - rhs);
  }
  // Classical form with sigma_i(kappa) = sum_s C(n-s, i-s) sigma_s(kappa~).
  CurvatureDensities d = curvature_densities(K);
  double rhs = 0;
  for (int i = 0; i <= n; ++i) {
    ScalarField f(K.size());
    for (std::size_t q = 0; q < f.size(); ++q) {
      double s = 0;
      for (int j = 0; j <= i; ++j) s += binomial(n - j, i - j) * std::pow(d.phi[q], -j) * d.sA[q][n - j];
      f[q] = s;
    }
    double ci = K.grid->integrate(f);
    auto g = [&](double t) { return std::pow(std::cosh(t), n - i) * std::pow(std::sinh(t), i); };
    double ti = rho == 0.0 ? 0.0
                           : boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, rho, 8, 1e-14);
    rhs += ci * ti;
  }
  double lhs = rho == 0.0 ? 0.0 : quermass_for_steiner(Kr, 0) - quermass_for_steiner(K, 0);
  res.classical_k0 = std::abs(lhs - rhs);
  return res;
}

WeightedSteinerResult weighted_steiner_check(const SupportField& K, double rho) {
  const int n = K.n();
  if (rho < 0) throw InvalidArgument("rho must be nonnegative");
  if (convexity(K).cls == Convexity::Not) throw DomainError("field is not h-convex");
  CurvatureDensities d = curvature_densities(K);
  double v0 = weighted_volume(K);
  double v1 = rho == 0.0 ? v0 : weighted_volume(scaled(K, rho));
  double form1 = 0, form2 = v0 * std::exp((n + 1) * rho);
  for (int k = 0; k <= n; ++k) {
    ScalarField fc(K.size()), fd(K.size());
    for (std::size_t i = 0; i < fc.size(); ++i) {
      double base = std::pow(d.phi[i], -k) * d.sA[i][n - k];
      fc[i] = d.coshr[i] * base;
      fd[i] = base / d.phi[i];
    }
    double ck = K.grid->integrate(fc), dk = K.grid->integrate(fd);
    form1 += ck * exp_sinh_integral(n - k + 1, k, rho) - dk * exp_sinh_integral(n - k, k + 1, rho);
    form2 += dk / (k + 1) * std::exp((n - k) * rho) * std::pow(std::sinh(rho), k + 1);
  }
  WeightedSteinerResult r;
  r.integral_form = std::abs(v1 - v0 - form1);
  r.closed_form = std::abs(v1 - form2);
  return r;
}

MinkowskiResiduals minkowski_formula_residuals(const SupportField& K) {
  const int n = K.n();
  if (convexity(K).cls != Convexity::Uniform) throw DomainError("Minkowski formulas require uniform h-convexity");
  CurvatureDensities d = curvature_densities(K);
  const std::size_t N = K.size();
  // p_m(kappa~) dmu = phi^{-m} p_{n-m}(A) dsigma; p_m(kappa) = sum_s C(m,s) p_s(kappa~).
  auto shifted = [&](std::size_t i, int m) { return std::pow(d.phi[i], -m) * d.pA[i][n - m]; };
  auto classical = [&](std::size_t i, int m) {
    double s = 0;
    for (int j = 0; j <= m; ++j) s += binomial(m, j) * shifted(i, j);
    return s;
  };
  MinkowskiResiduals r;
  for (int m = 0; m < n; ++m) {
    ScalarField a(N), b(N);
    for (std::size_t i = 0; i < N; ++i) {
      a[i] = d.coshr[i] * classical(i, m) - d.u_tilde[i] * classical(i, m + 1);
      b[i] = shifted(i, m) / d.phi[i] - d.u_tilde[i] * shifted(i, m + 1);
    }
    r.classical.push_back(std::abs(K.grid->integrate(a)));
    r.shifted.push_back(std::abs(K.grid->integrate(b)));
  }
  return r;
}

}  // namespace horocvx
