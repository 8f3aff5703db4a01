#include "horocvx/grid.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_legendre.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "horocvx/util.hpp"

namespace horocvx {

namespace {

constexpr double kPi = std::numbers::pi;

// Pbar_l^m(x) and dPbar/dtheta for l, m <= lmax, normalized so int_{-1}^{1} Pbar^2 dx = 1.
struct LegendreTable {
  int lmax;
  std::vector<double> p, dp;
  LegendreTable(int lmax_, double x, bool with_derivative) : lmax(lmax_) {
    std::size_t len = gsl_sf_legendre_array_n(lmax);
    p.assign(len, 0.0);
    dp.assign(len, 0.0);
    if (with_derivative)
      gsl_sf_legendre_deriv_alt_array_e(GSL_SF_LEGENDRE_FULL, lmax, x, 1.0, p.data(), dp.data());
    else
      gsl_sf_legendre_array_e(GSL_SF_LEGENDRE_FULL, lmax, x, 1.0, p.data());
  }
  double P(int l, int m) const { return p[gsl_sf_legendre_array_index(l, m)]; }
  double dP(int l, int m) const { return dp[gsl_sf_legendre_array_index(l, m)]; }
};

}  // namespace

GridPtr Grid::make(int n, int resolution) {
  if (n != 1 && n != 2) throw InvalidArgument("grid dimension must be 1 or 2");
  if (resolution <= 0) throw InvalidArgument("grid resolution must be positive");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->n_ = n;
  g->res_ = resolution;
  if (n == 1) {
    if (resolution % 2 != 0) throw InvalidArgument("S^1 node count must be even");
    if (resolution < 4) throw InvalidArgument("S^1 node count must be at least 4");
    g->build_s1();
  } else {
    if (resolution < 2) throw InvalidArgument("S^2 polar count must be at least 2");
    g->build_s2();
  }
  return g;
}

GridPtr make_grid(int n, int resolution) { return Grid::make(n, resolution); }

void Grid::build_s1() {
  const int N = res_;
  const double h = 2.0 * kPi / N;
  nodes_.resize(N);
  e1_.resize(N);
  e2_.assign(N, Dir{0, 0, 0});
  weights_.assign(N, h);
  anti_.resize(N);
  for (int j = 0; j < N; ++j) {
    double t = h * j;
    nodes_[j] = {std::cos(t), std::sin(t), 0.0};
    e1_[j] = {-std::sin(t), std::cos(t), 0.0};
    anti_[j] = (j + N / 2) % N;
  }
  d1_.assign(static_cast<std::size_t>(N) * N, 0.0);
  d2_.assign(static_cast<std::size_t>(N) * N, 0.0);
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      std::size_t idx = static_cast<std::size_t>(j) * N + k;
      if (j == k) {
        d2_[idx] = -kPi * kPi / (3.0 * h * h) - 1.0 / 6.0;
        continue;
      }
      int d = j - k;
      double sgn = (d % 2 == 0) ? 1.0 : -1.0;
      double half = 0.5 * d * h;
      d1_[idx] = 0.5 * sgn / std::tan(half);
      double s = std::sin(half);
      d2_[idx] = -0.5 * sgn / (s * s);
    }
  }
}

void Grid::build_s2() {
  const int L = res_;
  const int M = 2 * L;
  gsl_integration_glfixed_table* tab = gsl_integration_glfixed_table_alloc(L);
  std::vector<std::pair<double, double>> xw(L);
  for (int i = 0; i < L; ++i) gsl_integration_glfixed_point(-1.0, 1.0, i, &xw[i].first, &xw[i].second, tab);
  gsl_integration_glfixed_table_free(tab);
  std::sort(xw.begin(), xw.end(), [](auto& a, auto& b) { return a.first > b.first; });

  x_.resize(L);
  glw_.resize(L);
  theta_.resize(L);
  for (int j = 0; j < L; ++j) {
    x_[j] = xw[j].first;
    glw_[j] = xw[j].second;
    theta_[j] = std::acos(x_[j]);
  }
  // Enforce exact polar symmetry of the rule.
  for (int j = 0; j < L / 2; ++j) {
    double xs = 0.5 * (x_[j] - x_[L - 1 - j]);
    double ws = 0.5 * (glw_[j] + glw_[L - 1 - j]);
    x_[j] = xs;
    x_[L - 1 - j] = -xs;
    glw_[j] = glw_[L - 1 - j] = ws;
  }
  if (L % 2 == 1) x_[L / 2] = 0.0;
  for (int j = 0; j < L; ++j) theta_[j] = std::acos(x_[j]);

  azim_.resize(M);
  cos_.resize(M);
  sin_.resize(M);
  for (int k = 0; k < M; ++k) {
    azim_[k] = 2.0 * kPi * k / M;
    cos_[k] = std::cos(azim_[k]);
    sin_[k] = std::sin(azim_[k]);
  }

  const std::size_t total = static_cast<std::size_t>(L) * M;
  nodes_.resize(total);
  e1_.resize(total);
  e2_.resize(total);
  weights_.resize(total);
  anti_.resize(total);
  for (int j = 0; j < L; ++j) {
    double st = std::sin(theta_[j]), ct = x_[j];
    for (int k = 0; k < M; ++k) {
      std::size_t i = static_cast<std::size_t>(j) * M + k;
      double cp = std::cos(azim_[k]), sp = std::sin(azim_[k]);
      nodes_[i] = {st * cp, st * sp, ct};
      e1_[i] = {ct * cp, ct * sp, -st};
      e2_[i] = {-sp, cp, 0.0};
      weights_[i] = glw_[j] * 2.0 * kPi / M;
      anti_[i] = static_cast<std::size_t>(L - 1 - j) * M + (k + M / 2) % M;
    }
  }

  // Legendre tables at the ring nodes.
  plm_.assign(L, std::vector<double>(static_cast<std::size_t>(L) * L, 0.0));
  std::vector<std::vector<double>> pth(L, std::vector<double>(static_cast<std::size_t>(L) * L, 0.0));
  std::vector<std::vector<double>> ptt(L, std::vector<double>(static_cast<std::size_t>(L) * L, 0.0));
  for (int j = 0; j < L; ++j) {
    LegendreTable t(L - 1, x_[j], true);
    double st = std::sin(theta_[j]);
    double cot = x_[j] / st;
    for (int m = 0; m < L; ++m) {
      for (int l = m; l < L; ++l) {
        double P = t.P(l, m), Pt = t.dP(l, m);
        double Ptt = -cot * Pt - (l * (l + 1.0) - m * m / (st * st)) * P;
        plm_[m][l * L + j] = P;
        pth[m][l * L + j] = Pt;
        ptt[m][l * L + j] = Ptt;
      }
    }
  }
  proj_.assign(L, std::vector<double>(static_cast<std::size_t>(L) * L, 0.0));
  dth_ = proj_;
  dthth_ = proj_;
  for (int m = 0; m < L; ++m) {
    for (int j = 0; j < L; ++j) {
      for (int jp = 0; jp < L; ++jp) {
        double a = 0, b = 0, c = 0;
        for (int l = m; l < L; ++l) {
          double q = plm_[m][l * L + jp] * glw_[jp];
          a += plm_[m][l * L + j] * q;
          b += pth[m][l * L + j] * q;
          c += ptt[m][l * L + j] * q;
        }
        proj_[m][j * L + jp] = a;
        dth_[m][j * L + jp] = b;
        dthth_[m][j * L + jp] = c;
      }
    }
  }
}

void check_size(const Grid& g, const ScalarField& f) {
  if (f.size() != g.size()) throw InvalidArgument("field size does not match grid");
}

double Grid::integrate(const ScalarField& f) const {
  check_size(*this, f);
  KahanSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(weights_[i] * f[i]);
  return s.value();
}

void Grid::ring_transform(const ScalarField& f, std::vector<double>& c, std::vector<double>& s) const {
  const int L = res_, M = 2 * res_;
  c.assign(static_cast<std::size_t>(L) * L, 0.0);  // c[m*L + j]
  s.assign(static_cast<std::size_t>(L) * L, 0.0);
  for (int j = 0; j < L; ++j) {
    const double* row = f.data() + static_cast<std::size_t>(j) * M;
    for (int m = 0; m < L; ++m) {
      double sc = 0, ss = 0;
      for (int k = 0; k < M; ++k) {
        // m*k mod M keeps the angle table exact.
        int q = (m * k) % M;
        sc += row[k] * cos_[q];
        ss += row[k] * sin_[q];
      }
      double norm = (m == 0) ? 1.0 / M : 2.0 / M;
      c[m * L + j] = sc * norm;
      s[m * L + j] = ss * norm;
    }
  }
}

void Grid::derivatives(const ScalarField& f_in, VecField* grad, SymField* hess) const {
  check_size(*this, f_in);
  // Derivatives ignore constants; removing one makes constant fields differentiate to exactly 0.
  ScalarField f = f_in;
  const double ref = f_in[0];
  for (double& v : f) v -= ref;
  const std::size_t total = size();
  if (grad) grad->assign(total, Vec2{});
  if (hess) hess->assign(total, Sym2{});
  if (n_ == 1) {
    const int N = res_;
    for (int j = 0; j < N; ++j) {
      double a = 0, b = 0;
      const double* r1 = d1_.data() + static_cast<std::size_t>(j) * N;
      const double* r2 = d2_.data() + static_cast<std::size_t>(j) * N;
      for (int k = 0; k < N; ++k) {
        a += r1[k] * f[k];
        b += r2[k] * f[k];
      }
      if (grad) (*grad)[j].a = a;
      if (hess) (*hess)[j].xx = b;
    }
    return;
  }
  const int L = res_, M = 2 * res_;
  std::vector<double> c, s;
  ring_transform(f, c, s);
  // Projected values and polar derivatives of each azimuthal coefficient.
  std::vector<double> cp(L * L), sp(L * L), ct(L * L), st(L * L), ctt(L * L), stt(L * L);
  for (int m = 0; m < L; ++m) {
    const auto& P = proj_[m];
    const auto& D = dth_[m];
    const auto& DD = dthth_[m];
    for (int j = 0; j < L; ++j) {
      double a1 = 0, a2 = 0, b1 = 0, b2 = 0, c1 = 0, c2 = 0;
      for (int jp = 0; jp < L; ++jp) {
        double cv = c[m * L + jp], sv = s[m * L + jp];
        a1 += P[j * L + jp] * cv;
        a2 += P[j * L + jp] * sv;
        b1 += D[j * L + jp] * cv;
        b2 += D[j * L + jp] * sv;
        c1 += DD[j * L + jp] * cv;
        c2 += DD[j * L + jp] * sv;
      }
      cp[m * L + j] = a1;
      sp[m * L + j] = a2;
      ct[m * L + j] = b1;
      st[m * L + j] = b2;
      ctt[m * L + j] = c1;
      stt[m * L + j] = c2;
    }
  }
  for (int j = 0; j < L; ++j) {
    double sn = std::sin(theta_[j]), cs = x_[j];
    for (int k = 0; k < M; ++k) {
      double ft = 0, ftt = 0, fp = 0, fpp = 0, ftp = 0;
      for (int m = 0; m < L; ++m) {
        int q = (m * k) % M;
        double co = cos_[q], si = sin_[q];
        std::size_t id = m * L + j;
        ft += ct[id] * co + st[id] * si;
        ftt += ctt[id] * co + stt[id] * si;
        fp += m * (-cp[id] * si + sp[id] * co);
        fpp += -double(m) * m * (cp[id] * co + sp[id] * si);
        ftp += m * (-ct[id] * si + st[id] * co);
      }
      std::size_t i = static_cast<std::size_t>(j) * M + k;
      if (grad) (*grad)[i] = Vec2{ft, fp / sn};
      if (hess) {
        Sym2 H;
        H.xx = ftt;
        H.xy = ftp / sn - cs / (sn * sn) * fp;
        H.yy = fpp / (sn * sn) + cs / sn * ft;
        (*hess)[i] = H;
      }
    }
  }
}

ScalarField Grid::band_project(const ScalarField& f) const {
  check_size(*this, f);
  if (n_ == 1) {
    const int N = res_;
    double nyq = 0;
    for (int j = 0; j < N; ++j) nyq += (j % 2 == 0 ? 1.0 : -1.0) * f[j];
    nyq /= N;
    ScalarField out(f);
    for (int j = 0; j < N; ++j) out[j] -= (j % 2 == 0 ? 1.0 : -1.0) * nyq;
    return out;
  }
  const int L = res_, M = 2 * res_;
  std::vector<double> c, s;
  ring_transform(f, c, s);
  ScalarField out(size(), 0.0);
  for (int m = 0; m < L; ++m) {
    const auto& P = proj_[m];
    for (int j = 0; j < L; ++j) {
      double a = 0, b = 0;
      for (int jp = 0; jp < L; ++jp) {
        a += P[j * L + jp] * c[m * L + jp];
        b += P[j * L + jp] * s[m * L + jp];
      }
      for (int k = 0; k < M; ++k) {
        int q = (m * k) % M;
        out[static_cast<std::size_t>(j) * M + k] += a * cos_[q] + b * sin_[q];
      }
    }
  }
  return out;
}

std::vector<double> Grid::resample(const ScalarField& f, const std::vector<Dir>& targets) const {
  check_size(*this, f);
  std::vector<double> out(targets.size(), 0.0);
  if (n_ == 1) {
    const int N = res_;
    const int K = N / 2;
    std::vector<double> a(K + 1, 0.0), b(K + 1, 0.0);
    for (int m = 0; m <= K; ++m) {
      double sa = 0, sb = 0;
      for (int j = 0; j < N; ++j) {
        int q = (m * j) % N;
        double ang = 2.0 * kPi * q / N;
        sa += f[j] * std::cos(ang);
        sb += f[j] * std::sin(ang);
      }
      double norm = (m == 0 || m == K) ? 1.0 / N : 2.0 / N;
      a[m] = sa * norm;
      b[m] = (m == K) ? 0.0 : sb * norm;
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
      double th = std::atan2(targets[t][1], targets[t][0]);
      double v = 0;
      for (int m = 0; m <= K; ++m) v += a[m] * std::cos(m * th) + b[m] * std::sin(m * th);
      out[t] = v;
    }
    return out;
  }
  const int L = res_;
  std::vector<double> c, s;
  ring_transform(f, c, s);
  // Spherical-harmonic coefficients alm[m*L + l], blm[m*L + l].
  std::vector<double> alm(L * L, 0.0), blm(L * L, 0.0);
  for (int m = 0; m < L; ++m) {
    for (int l = m; l < L; ++l) {
      double a = 0, b = 0;
      for (int j = 0; j < L; ++j) {
        double q = plm_[m][l * L + j] * glw_[j];
        a += q * c[m * L + j];
        b += q * s[m * L + j];
      }
      alm[m * L + l] = a;
      blm[m * L + l] = b;
    }
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Dir& d = targets[t];
    double x = std::clamp(d[2], -1.0, 1.0);
    double ph = std::atan2(d[1], d[0]);
    LegendreTable tab(L - 1, x, false);
    double v = 0;
    for (int m = 0; m < L; ++m) {
      double co = std::cos(m * ph), si = std::sin(m * ph);
      for (int l = m; l < L; ++l) v += tab.P(l, m) * (alm[m * L + l] * co + blm[m * L + l] * si);
    }
    out[t] = v;
  }
  return out;
}

std::string Grid::describe() const {
  if (n_ == 1) return "s1:" + std::to_string(res_);
  return "s2:" + std::to_string(res_) + "x" + std::to_string(2 * res_);
}

double integrate(const Grid& g, const ScalarField& f) { return g.integrate(f); }

VecField gradient(const Grid& g, const ScalarField& f) {
  VecField out;
  g.derivatives(f, &out, nullptr);
  return out;
}

SymField hessian(const Grid& g, const ScalarField& f) {
  SymField out;
  g.derivatives(f, nullptr, &out);
  return out;
}

ScalarField antipodal(const Grid& g, const ScalarField& f) {
  check_size(g, f);
  ScalarField out(f.size());
  const auto& a = g.antipodal_index();
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[a[i]];
  return out;
}

double even_error(const Grid& g, const ScalarField& f) {
  check_size(g, f);
  double e = 0;
  const auto& a = g.antipodal_index();
  for (std::size_t i = 0; i < f.size(); ++i) e = std::max(e, std::abs(f[i] - f[a[i]]));
  return e;
}

ScalarField even_project(const Grid& g, const ScalarField& f) {
  check_size(g, f);
  ScalarField out(f.size());
  const auto& a = g.antipodal_index();
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = 0.5 * (f[i] + f[a[i]]);
  return out;
}

std::vector<double> resample(const Grid& g, const ScalarField& f, const std::vector<Dir>& targets) {
  return g.resample(f, targets);
}

Dir ambient_gradient(const Grid& g, std::size_t i, const Vec2& grad) {
  const Dir& e1 = g.frame1(i);
  const Dir& e2 = g.frame2(i);
  return {grad.a * e1[0] + grad.b * e2[0], grad.a * e1[1] + grad.b * e2[1], grad.a * e1[2] + grad.b * e2[2]};
}

}  // namespace horocvx
