#include "horocvx/problems.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "horocvx/util.hpp"

namespace horocvx {

namespace {

void require_positive(const ScalarField& f) {
  for (double v : f)
    if (!(v > 0) || !std::isfinite(v)) throw InvalidArgument("prescribed function must be positive");
}

double density_at(int n, int k, double p, double phi, const Sym2& A) {
  return std::pow(phi, -p - k) * p_elem(n, n - k, A);
}

}  // namespace

MeasureDensity measure_density(const SupportField& K, double p, int k) {
  const int n = K.n();
  if (k < 0 || k > n) throw InvalidArgument("k out of range");
  if (convexity(K).cls != Convexity::Uniform) throw DomainError("measure density requires uniform h-convexity");
  ATensorField A = a_tensor(K);
  MeasureDensity m{p, k, ScalarField(K.size())};
  for (std::size_t i = 0; i < K.size(); ++i) m.density[i] = density_at(n, k, p, K.phi[i], A.a[i]);
  return m;
}

double mixed_quermass(const SupportField& K, const SupportField& L, double p, int k) {
  require_same_grid(K, L);
  if (p == 0) throw InvalidArgument("mixed quermassintegral requires p != 0");
  MeasureDensity m = measure_density(K, p, k);
  ScalarField f(K.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(L.phi[i], p) * m.density[i];
  return K.grid->integrate(f) / p;
}

double J_p(const SupportField& K, const ScalarField& f, double p) {
  check_size(*K.grid, f);
  require_positive(f);
  ScalarField g(K.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = p == 0 ? f[i] * std::log(K.phi[i]) : f[i] * std::pow(K.phi[i], p) / p;
  return K.grid->integrate(g);
}

PdeResidual pde_residual(const SupportField& K, const ScalarField& f, double p, int k, double gamma) {
  check_size(*K.grid, f);
  require_positive(f);
  const int n = K.n();
  if (k < 0 || k > n) throw InvalidArgument("k out of range");
  ATensorField A = a_tensor(K);
  PdeResidual r;
  r.residual.resize(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) {
    r.residual[i] = density_at(n, k, p, K.phi[i], A.a[i]) - gamma * f[i];
    r.sup = std::max(r.sup, std::abs(r.residual[i]));
  }
  return r;
}

GammaFit fit_gamma(const SupportField& K, const ScalarField& f, double p, int k) {
  check_size(*K.grid, f);
  require_positive(f);
  const int n = K.n();
  ATensorField A = a_tensor(K);
  ScalarField ratio(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) ratio[i] = density_at(n, k, p, K.phi[i], A.a[i]) / f[i];
  GammaFit g;
  g.gamma = K.grid->integrate(ratio) / sphere_area(n);
  for (double v : ratio) g.variation = std::max(g.variation, std::abs(v - g.gamma));
  g.variation /= std::abs(g.gamma);
  return g;
}

KwResidual kw_residual(const SupportField& K, const ScalarField& f, int k) {
  const int n = K.n();
  const Grid& g = *K.grid;
  check_size(g, f);
  if (k < 0 || k > n) throw InvalidArgument("k out of range");
  if (convexity(K).cls != Convexity::Uniform) throw DomainError("KW residual requires uniform h-convexity");
  FieldGeometry geo = analyze(K);
  VecField df = gradient(g, f);
  KwResidual r;
  for (int c = 0; c <= n; ++c) {
    ScalarField a(K.size()), b(K.size());
    for (std::size_t i = 0; i < K.size(); ++i) {
      double phi = K.phi[i];
      // D x_c has frame components (e1)_c, (e2)_c.
      double dx = df[i].a * g.frame1(i)[c] + (n == 2 ? df[i].b * g.frame2(i)[c] : 0.0);
      a[i] = std::pow(phi, -n) * dx;
      Dir dphi = ambient_gradient(g, i, geo.grad[i]);
      b[i] = (dphi[c] / phi + g.nodes()[i][c]) * std::pow(phi, -k) * p_elem(n, n - k, geo.A.a[i]);
    }
    r.coordinate.push_back(g.integrate(a));
    r.general.push_back(g.integrate(b));
  }
  double s = 0;
  for (double v : r.general) s += v * v;
  r.general_norm = std::sqrt(s);
  return r;
}

double ball_zeta(int n, int k, double p, double c) {
  return std::pow(c, -p - k) * std::pow(0.5 * (c - 1.0 / c), n - k);
}

BallSolutionReport ball_solutions(int n, int k, double p, double gamma) {
  if (n < 1 || k < 0 || k > n - 1) throw InvalidArgument("ball classification requires 0 <= k <= n-1");
  if (p < -n) throw InvalidArgument("ball classification requires p >= -n");
  if (!(gamma > 0)) throw InvalidArgument("gamma must be positive");
  BallSolutionReport rep;
  auto zeta = [&](double c) { return ball_zeta(n, k, p, c); };
  auto solve = [&](double lo, double hi) {
    auto fn = [&](double c) { return zeta(c) - gamma; };
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t it = 200;
    auto br = boost::math::tools::toms748_solve(fn, lo, hi, tol, it);
    return 0.5 * (br.first + br.second);
  };
  // Grows the upper end geometrically until zeta crosses gamma.
  auto upper = [&](double from, bool increasing) {
    double hi = std::max(2.0, 2.0 * from);
    for (int i = 0; i < 200; ++i) {
      if (increasing ? zeta(hi) > gamma : zeta(hi) < gamma) return hi;
      hi *= 2.0;
    }
    throw DomainError("failed to bracket a root of the ball equation");
  };

  const double m = n - 2.0 * k;
  if (p == -n) {
    rep.theorem_case = 7;
    rep.description = "geodesic balls of a common radius with free center";
    double c = std::sqrt(1.0 + 2.0 * std::pow(gamma, 1.0 / (n - k)));
    rep.roots = {c};
    rep.free_center = true;
    rep.radius = 0.5 * std::log(1.0 + 2.0 * std::pow(gamma, 1.0 / (n - k)));
  } else if (p > m) {
    double e = 2 * k + p - n;
    rep.gamma0 = std::pow(e, e / 2) * std::pow(n - k, n - k) / std::pow(n + p, (n + p) / 2);
    rep.t0 = std::sqrt((n + p) / e);
    if (std::abs(gamma - rep.gamma0) <= 1e-12 * rep.gamma0) {
      rep.theorem_case = 2;
      rep.description = "unique ball at the maximum of zeta";
      rep.roots = {rep.t0};
    } else if (gamma < rep.gamma0) {
      rep.theorem_case = 1;
      rep.description = "two centered balls";
      rep.roots = {solve(1.0, rep.t0), solve(rep.t0, upper(rep.t0, false))};
    } else {
      rep.theorem_case = 3;
      rep.description = "no solution";
    }
  } else if (p == m) {
    if (gamma < std::pow(2.0, k - n)) {
      rep.theorem_case = 4;
      rep.description = "unique centered ball";
      rep.roots = {solve(1.0, upper(1.0, true))};
    } else {
      rep.theorem_case = 5;
      rep.description = "no solution";
    }
  } else {
    rep.theorem_case = 6;
    rep.description = "unique centered ball";
    rep.roots = {solve(1.0, upper(1.0, true))};
  }
  for (double c : rep.roots) rep.residuals.push_back(std::abs(zeta(c) - gamma) / gamma);
  if (!rep.free_center && rep.roots.size() == 1) rep.radius = std::log(rep.roots[0]);
  return rep;
}

AssumptionHReport check_assumption_h(GridPtr grid, const ScalarField& f, int k, double p) {
  const Grid& g = *grid;
  const int n = g.n();
  check_size(g, f);
  require_positive(f);
  if (n < 2) throw InvalidArgument("assumption on h requires n >= 2");
  if (k < 1 || k > n - 1) throw InvalidArgument("assumption on h requires 1 <= k <= n-1");
  if (p < -n) throw InvalidArgument("assumption on h requires p >= -n");
  const std::size_t N = g.size();
  ScalarField h(N);
  for (std::size_t i = 0; i < N; ++i) h[i] = std::pow(f[i], -1.0 / (n - k));

  AssumptionHReport rep;
  rep.worst_eigenvalue = std::numeric_limits<double>::infinity();
  if (p == -n) {
    rep.regime = 1;
    double lo = *std::min_element(h.begin(), h.end()), hi = *std::max_element(h.begin(), h.end());
    double var = (hi - lo) / hi;
    rep.worst_eigenvalue = -var;
    rep.worst_node = std::size_t(std::max_element(h.begin(), h.end()) - h.begin());
    rep.pass = var <= 1e-10;
    return rep;
  }
  // Pointwise symmetric form M = D2 w + c(i) I, evaluated for the regime's w.
  ScalarField w = h;
  double beta = 1.0;
  if (p >= -k) {
    beta = (n - k) / (n + p);
    for (std::size_t i = 0; i < N; ++i) w[i] = std::pow(h[i], beta);
  }
  VecField dw;
  SymField hw;
  g.derivatives(w, &dw, &hw);
  if (p <= -(n + k) / 2.0) {
    rep.regime = 2;
  } else if (p < -k) {
    rep.regime = 3;
  } else if (p <= n - 2 * k) {
    rep.regime = 4;
  } else {
    rep.regime = 5;
  }
  for (std::size_t i = 0; i < N; ++i) {
    double g2 = dw[i].a * dw[i].a + dw[i].b * dw[i].b;
    double shift = 0;
    switch (rep.regime) {
      case 2:
        // Gradient term as printed: |Dh| unsquared.
        shift = -(n - 3.0 * k - 2 * p) / (n - k) * std::sqrt(g2) + std::pow((n + p) / (n - k), 2) * w[i];
        break;
      case 3:
        shift = -std::pow(n - 3.0 * k - 2 * p, 2) / (2 * (n + p) * (n + k + 2 * p)) * g2 / w[i] +
                0.5 * (n + p) / (n - k) * w[i];
        break;
      case 4:
        shift = -0.5 * g2 / w[i] + 0.5 * w[i];
        break;
      default:
        shift = -0.5 * g2 / w[i] + (n - k) / (n + p) * w[i];
        break;
    }
    Sym2 M{hw[i].xx + shift, hw[i].xy, hw[i].yy + shift};
    double e = eigenvalues(n, M)[0];
    if (e < rep.worst_eigenvalue) {
      rep.worst_eigenvalue = e;
      rep.worst_node = i;
    }
  }
  rep.pass = rep.worst_eigenvalue >= -1e-10;
  return rep;
}

}  // namespace horocvx
