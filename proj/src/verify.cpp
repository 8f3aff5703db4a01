#include "horocvx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "horocvx/euclid.hpp"
#include "horocvx/io.hpp"
#include "horocvx/psum.hpp"
#include "horocvx/quermass.hpp"
#include "horocvx/util.hpp"

namespace horocvx {

double record_scale(const CheckRecord& r) { return std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)}); }

void finalize(CheckRecord& r, const SuiteOptions& opt) {
  r.gap = r.lhs - r.rhs;
  const double s = record_scale(r);
  switch (r.expect) {
    case Expect::Inequality:
      r.pass = r.gap >= -opt.tol * s;
      break;
    case Expect::Equality:
      r.pass = std::abs(r.gap) <= opt.eq_tol * s;
      break;
    case Expect::Negative:
      r.pass = r.gap < 0;
      break;
  }
  if (!std::isfinite(r.gap)) r.pass = false;
}

SupportField random_hconvex_field(GridPtr grid, std::mt19937_64& rng, bool even) {
  std::uniform_real_distribution<double> U(-1, 1);
  double a = 0.05 * U(rng), b = 0.05 * U(rng), c = even ? 0.0 : 0.08 * U(rng), d = 0.01 * U(rng);
  double base = 1.6 + 0.8 * (U(rng) + 1) / 2;
  if (grid->n() == 1)
    return make_field(grid, sample(*grid, [&](const Dir& z) {
                        double t = std::atan2(z[1], z[0]);
                        return base + a * std::cos(2 * t) + b * std::sin(2 * t) + c * std::cos(t) + d * std::cos(4 * t);
                      }));
  return make_field(grid, sample(*grid, [&](const Dir& z) {
                      return base + a * (3 * z[2] * z[2] - 1) + b * z[0] * z[1] + c * z[1] + d * z[0] * z[2];
                    }));
}

std::vector<CorpusField> corpus(GridPtr grid, unsigned long long seed) {
  const int n = grid->n();
  std::vector<CorpusField> out;
  for (double r : {0.3, 0.7, 1.2})
    out.push_back({"origin_ball_r" + format_double(r), support_of_ball(grid, origin(n), r), true, true});
  Dir d1{}, d2{};
  d1[0] = 1;
  d2[0] = 0.6;
  d2[n] = 0.8;
  out.push_back({"off_ball_a", support_of_ball(grid, radial_point(n, d1, 0.4), 0.6), true, false});
  out.push_back({"off_ball_b", support_of_ball(grid, radial_point(n, d2, 0.25), 0.9), true, false});
  std::mt19937_64 rng(seed + 1000 * n);
  for (int i = 0; i < 4; ++i)
    out.push_back({"perturbed" + std::to_string(i), random_hconvex_field(grid, rng, i % 2 == 0), false, false});
  return out;
}

double counterexample_gap(int n, double x_height) {
  auto f = [&](double r) {
    double S = std::pow(x_height, 1.0 / (n + 1)) * std::sinh(r);
    return S + std::sqrt(S * S + 1);
  };
  return f(std::log(73.0 / 60)) - 0.5 * f(std::log(11.0 / 10)) - 0.5 * f(std::log(4.0 / 3));
}

namespace {

struct Ctx {
  const SuiteOptions& opt;
  std::string suite;
  std::vector<CheckRecord>* out;

  void add(const std::string& id, double lhs, double rhs, Expect e, bool asserted = true) const {
    if (!asserted && !opt.exploratory) return;
    CheckRecord r;
    r.suite = suite;
    r.case_id = asserted ? id : "exploratory/" + id;
    r.lhs = lhs;
    r.rhs = rhs;
    r.expect = e;
    r.asserted = asserted;
    finalize(r, opt);
    out->push_back(std::move(r));
  }
};

Expect eq_if(bool b) { return b ? Expect::Equality : Expect::Inequality; }

std::vector<GridPtr> grids(const SuiteOptions& o) { return {make_grid(1, o.s1_nodes), make_grid(2, o.s2_polar)}; }

std::string tag(int n) { return "n" + std::to_string(n) + "/"; }

// Modified quermassintegrals and mean radii for k = 0..n.
struct Radii {
  std::vector<double> W, r;
};

Radii radii(const SupportField& K) {
  Radii R;
  for (int k = 0; k <= K.n(); ++k) {
    double w = modified_quermass(K, k).value;
    R.W.push_back(w);
    R.r.push_back(I_k_inverse(K.n(), k, std::max(w, 0.0)));
  }
  return R;
}

// int phi^{-q} p_{n-k}(A) dsigma, i.e. int (cosh r - u~)^{q-k} p_k(kappa~) dmu.
double weighted_curvature(const SupportField& K, double q, int k) {
  CurvatureDensities d = curvature_densities(K);
  const int n = K.n();
  ScalarField f(K.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(d.phi[i], -q) * d.pA[i][n - k];
  return K.grid->integrate(f);
}

double power_mean(const SupportField& K, double p) {
  ScalarField f(K.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(K.phi[i], p);
  return std::pow(K.grid->integrate(f) / sphere_area(K.n()), 1.0 / p);
}

double ball_af(int n, int k, double r) { return sphere_area(n) * std::pow(std::sinh(r), n - k) * std::exp(-k * r); }

void suite_bm_balls(const Ctx& c) {
  std::mt19937_64 rng(c.opt.seed);
  std::uniform_real_distribution<double> U(0, 1);
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    for (int trial = 0; trial < 6; ++trial) {
      double p = 0.5 + 1.5 * U(rng), a = 0.3 + 0.7 * U(rng), b = std::max(0.0, 1 - a) + 0.5 * U(rng);
      double r1 = 0.2 + 0.8 * U(rng), r2 = 0.2 + 0.8 * U(rng);
      bool same = trial % 2 == 0;
      Dir dx{}, dy{};
      dx[0] = 1;
      dy[n] = 1;
      HPoint X = radial_point(n, dx, 0.3 * U(rng)), Y = same ? X : radial_point(n, dy, 0.3 * U(rng));
      SupportField O = p_sum(a, support_of_ball(g, X, r1), p, b, support_of_ball(g, Y, r2)).field;
      Radii R = radii(O);
      double rhs = a * std::exp(p * r1) + b * std::exp(p * r2);
      for (int k = 0; k <= n; ++k)
        c.add(tag(n) + (same ? "same_center" : "distinct_centers") + std::to_string(trial) + "/k" + std::to_string(k),
              std::exp(p * R.r[k]), rhs, eq_if(same));
    }
  }
}

void suite_bm_k_n(const Ctx& c) {
  std::mt19937_64 rng(c.opt.seed + 1);
  std::uniform_real_distribution<double> U(0, 1);
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    for (int trial = 0; trial < 6; ++trial) {
      SupportField K = random_hconvex_field(g, rng, trial % 2 == 0);
      bool dil = trial >= 4;
      SupportField L = dil ? p_dilate(1.5 + U(rng), 1.0, K) : random_hconvex_field(g, rng, trial % 2 == 1);
      double p = 0.5 + 1.5 * U(rng), a = 0.3 + 0.7 * U(rng), b = std::max(0.0, 1 - a) + 0.5 * U(rng);
      SupportField O = p_sum(a, K, p, b, L).field;
      Radii RO = radii(O), RK = radii(K), RL = radii(L);
      std::string id = tag(n) + (dil ? "dilates" : "pair") + std::to_string(trial);
      c.add(id + "/k" + std::to_string(n), std::exp(p * RO.r[n]),
            a * std::exp(p * RK.r[n]) + b * std::exp(p * RL.r[n]), eq_if(dil));
      // Conjectured for k < n.
      for (int k = 0; k < n; ++k)
        c.add(id + "/k" + std::to_string(k), std::exp(p * RO.r[k]),
              a * std::exp(p * RK.r[k]) + b * std::exp(p * RL.r[k]), Expect::Inequality, false);
    }
  }
}

void suite_af_chain(const Ctx& c) {
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    for (const CorpusField& cf : corpus(g, c.opt.seed)) {
      Radii R = radii(cf.field);
      for (int l = 0; l <= n; ++l)
        for (int k = l + 1; k <= n; ++k)
          c.add(tag(n) + cf.id + "/l" + std::to_string(l) + "k" + std::to_string(k), R.W[k],
                I_k(n, k, R.r[l]), eq_if(cf.ball));
      for (int k = 0; k < n; ++k)
        c.add(tag(n) + cf.id + "/curvature_k" + std::to_string(k), curvature_integral(cf.field, k),
              ball_af(n, k, R.r[k]), eq_if(cf.ball));
    }
  }
}

void suite_min_I_Kball(const Ctx& c) {
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    for (const CorpusField& cf : corpus(g, c.opt.seed)) {
      Radii R = radii(cf.field);
      for (double p : {double(-n), -0.5, 1.0, 2.5}) {
        double lhs = power_mean(cf.field, p);
        for (int k = 0; k <= n; ++k) {
          bool eq = p > -n ? cf.origin_ball : (k == n || cf.ball);
          c.add(tag(n) + cf.id + "/p" + format_double(p) + "/k" + std::to_string(k), lhs, std::exp(R.r[k]),
                eq_if(eq));
        }
      }
    }
  }
}

void suite_min_I_p1_Lball(const Ctx& c) {
  GridPtr g = make_grid(2, c.opt.s2_polar);
  const int n = 2, k = 1;
  for (const CorpusField& cf : corpus(g, c.opt.seed)) {
    double r = radii(cf.field).r[k];
    double i1 = weighted_curvature(cf.field, 1 + k, k), i0 = weighted_curvature(cf.field, k, k);
    for (double rL : {0.3, 1.0})
      c.add(tag(n) + cf.id + "/rL" + format_double(rL), std::exp(rL) * i1 - i0,
            ball_af(n, k, r) * (std::exp(rL - r) - 1), eq_if(cf.origin_ball));
    double s = ball_af(n, k, r);
    c.add(tag(n) + cf.id + "/point_first", i1 - s * std::exp(-r), i0 - s, eq_if(cf.origin_ball));
    c.add(tag(n) + cf.id + "/point_second", i0 - s, 0.0, eq_if(cf.ball));
  }
}

void suite_min_II(const Ctx& c) {
  GridPtr g2 = make_grid(2, c.opt.s2_polar);
  for (const CorpusField& cf : corpus(g2, c.opt.seed)) {
    const int n = 2, k = 1;
    double r = radii(cf.field).r[k];
    double pk = weighted_curvature(cf.field, k, k);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      double lhs = weighted_curvature(cf.field, p + k, k);
      std::string id = tag(n) + cf.id + "/p" + format_double(p);
      c.add(id + "/hlw", lhs, ball_af(n, k, r) * std::exp(-p * r), eq_if(cf.origin_ball));
      c.add(id + "/holder", lhs, pk * std::exp(-p * r), eq_if(cf.origin_ball));
    }
  }
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    for (const CorpusField& cf : corpus(g, c.opt.seed)) {
      double r0 = radii(cf.field).r[0];
      c.add(tag(n) + cf.id + "/k0_p1", weighted_curvature(cf.field, 1, 0),
            sphere_area(n) * std::pow(std::sinh(r0), n) * std::exp(-r0), eq_if(cf.origin_ball));
    }
  }
}

void suite_weighted_vol_cmp(const Ctx& c) {
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    for (const CorpusField& cf : corpus(g, c.opt.seed)) {
      double r0 = radii(cf.field).r[0];
      c.add(tag(n) + cf.id, weighted_volume(cf.field), sphere_area(n) * std::pow(std::sinh(r0), n + 1) / (n + 1),
            eq_if(cf.origin_ball));
    }
  }
}

// int cosh r phi^{-q} sigma_j(kappa) dmu for the requested j (q = 0 gives the unweighted form).
double coshr_integral(const SupportField& K, double q, int j) {
  BoundaryData bd = boundary_data(K);
  const int n = K.n();
  ScalarField f(K.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::array<double, 2> kap{1 + 1 / bd.lambda_tilde[i][0], n == 2 ? 1 + 1 / bd.lambda_tilde[i][1] : 0.0};
    f[i] = bd.coshr[i] * std::pow(K.phi[i], -q) * sigma_elem(n, j, kap) * bd.area_density[i];
  }
  return K.grid->integrate(f);
}

void suite_weighted_iso(const Ctx& c) {
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    const double om = sphere_area(n);
    for (const CorpusField& cf : corpus(g, c.opt.seed)) {
      double V = (n + 1) * weighted_volume(cf.field);
      double rhs = std::sqrt(V * V + std::pow(om, 2.0 / (n + 1)) * std::pow(V, 2.0 * n / (n + 1)));
      c.add(tag(n) + cf.id + "/theorem_f", coshr_integral(cf.field, 0, 0), rhs, eq_if(cf.origin_ball));
      double S = S_functional(cf.field), q = std::sqrt(S * S + 1);
      for (double p : {1.0, 2.0, 3.5})
        c.add(tag(n) + cf.id + "/p" + format_double(p), coshr_integral(cf.field, p, 0),
              om * std::pow(S, n) * q * std::pow(S + q, -p), eq_if(cf.origin_ball));
    }
  }
}

void suite_weighted_af(const Ctx& c) {
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    for (const CorpusField& cf : corpus(g, c.opt.seed)) {
      double V = weighted_volume(cf.field), small = V;
      for (int k = 0; k <= n; ++k) small += coshr_integral(cf.field, 0, k) / (k + 1);
      double big = std::pow(std::pow(V, 1.0 / (n + 1)) +
                                std::pow(V, -double(n) / (n + 1)) * coshr_integral(cf.field, 0, 0) / (n + 1),
                            n + 1);
      // Both sides scale by x_{n+1} for B(X, r), so every geodesic ball is an equality case.
      c.add(tag(n) + cf.id, big, small, eq_if(cf.ball));
    }
  }
}

void suite_hk_n1(const Ctx& c) {
  GridPtr g = make_grid(1, c.opt.s1_nodes);
  std::vector<CorpusField> cs = corpus(g, c.opt.seed);
  cs.push_back({"cos2", make_field(g, sample(*g, [](const Dir& z) {
                          return 2.0 + 0.2 * std::cos(2 * std::atan2(z[1], z[0]));
                        })),
                false, false});
  for (const CorpusField& cf : cs) {
    CurvatureDensities d = curvature_densities(cf.field);
    ScalarField f(g->size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = (d.pA[i][1] - d.u_tilde[i]) * d.pA[i][1];
    c.add(tag(1) + cf.id, g->integrate(f), 0.0, eq_if(cf.ball));
  }
}

void suite_euclid(const Ctx& c) {
  std::mt19937_64 rng(c.opt.seed + 2);
  std::uniform_real_distribution<double> U(0, 1);
  for (GridPtr g : grids(c.opt)) {
    const int n = g->n();
    const double e = 1.0 / (n + 1);
    SupportField N = support_of_point(g, origin(n));
    for (int trial = 0; trial < 6; ++trial) {
      SupportField K = random_hconvex_field(g, rng, trial % 2 == 0);
      bool dil = trial >= 4;
      SupportField L = dil ? p_dilate(1.2 + U(rng), 1.0, K) : random_hconvex_field(g, rng, trial % 2 == 1);
      double p = 1 + U(rng), a = 0.3 + 0.7 * U(rng), b = std::max(0.0, 1 - a) + 0.5 * U(rng);
      double VK = V_functional(K).value, VL = V_functional(L).value;
      double VO = V_functional(p_sum(a, K, p, b, L).field).value;
      std::string id = tag(n) + (dil ? "dilates" : "pair") + std::to_string(trial);
      c.add(id + "/bm", std::pow(VO, p * e), a * std::pow(VK, p * e) + b * std::pow(VL, p * e), eq_if(dil));
      // Coefficients a^{1/p}, b^{1/p}: not implied by the Firey sum homogeneity.
      c.add(id + "/bm_root_coefficients", std::pow(VO, p * e),
            std::pow(a, 1 / p) * std::pow(VK, p * e) + std::pow(b, 1 / p) * std::pow(VL, p * e), Expect::Inequality,
            false);
      for (double q : {1.0, p, 3.0})
        c.add(id + "/min_p" + format_double(q), V_p_functional(K, L, q).value,
              std::pow(VK, (n + 1 - q) * e) * std::pow(VL, q * e), eq_if(dil));
    }
    for (const CorpusField& cf : corpus(g, c.opt.seed)) {
      double V = V_functional(cf.field).value;
      for (double p : {1.0, 1.5, 2.0, 3.0}) {
        double lhs = (n + 1) * V_p_functional(cf.field, N, p).value;
        double rhs = std::pow(sphere_area(n), p * e) * std::pow((n + 1) * V, (n + 1 - p) * e);
        c.add(tag(n) + cf.id + "/iso_p" + format_double(p), lhs, rhs, eq_if(p == 1 ? cf.ball : cf.origin_ball));
      }
    }
  }
}

void suite_counterexample(const Ctx& c) {
  auto f = [](double S) { return S + std::sqrt(S * S + 1); };
  const double r1 = std::log(11.0 / 10), r2 = std::log(4.0 / 3), r3 = std::log(73.0 / 60);
  for (int n : {1, 2}) {
    for (double base : {100.0, 2.0}) {
      double S = std::pow(std::pow(base, n + 1), 1.0 / (n + 1));
      double lhs = f(S * std::sinh(r3)), rhs = 0.5 * f(S * std::sinh(r1)) + 0.5 * f(S * std::sinh(r2));
      c.add(tag(n) + "x=" + format_double(base) + "^(n+1)", lhs, rhs,
            base > 10 ? Expect::Inequality : Expect::Negative);
    }
    // Closed form S(B(X, r)) = x_{n+1}^{1/(n+1)} sinh r against quadrature.
    GridPtr g = n == 1 ? make_grid(1, c.opt.s1_nodes) : make_grid(2, c.opt.s2_polar);
    Dir d{};
    d[0] = 1;
    HPoint X = radial_point(n, d, std::acosh(2.0));
    const double rs[] = {r1, r2, r3};
    for (int i = 0; i < 3; ++i)
      c.add(tag(n) + "ball_S_x=2/r" + std::to_string(i + 1), S_functional(support_of_ball(g, X, rs[i])),
            std::pow(2.0, 1.0 / (n + 1)) * std::sinh(rs[i]), Expect::Equality);
  }
}

using SuiteFn = void (*)(const Ctx&);

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> m = {
      {"bm_balls", suite_bm_balls},
      {"bm_k_n", suite_bm_k_n},
      {"af_chain", suite_af_chain},
      {"min_I_Kball", suite_min_I_Kball},
      {"min_I_p1_Lball", suite_min_I_p1_Lball},
      {"min_II", suite_min_II},
      {"weighted_af", suite_weighted_af},
      {"weighted_iso", suite_weighted_iso},
      {"weighted_vol_cmp", suite_weighted_vol_cmp},
      {"hk_n1", suite_hk_n1},
      {"euclid", suite_euclid},
      {"counterexample", suite_counterexample},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"bm_balls",    "bm_k_n",          "af_chain",    "min_I_Kball",
                                                 "min_I_p1_Lball", "min_II",       "weighted_af", "weighted_iso",
                                                 "weighted_vol_cmp", "hk_n1",      "euclid",      "counterexample"};
  return names;
}

std::vector<CheckRecord> run_suite(const std::string& name, const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  if (name == "all") {
    for (const std::string& s : suite_names()) {
      auto r = run_suite(s, opt);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }
  auto it = registry().find(name);
  if (it == registry().end()) throw InvalidArgument("unknown suite '" + name + "'");
  it->second(Ctx{opt, name, &out});
  return out;
}

bool all_pass(const std::vector<CheckRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return !r.asserted || r.pass; });
}

void write_records_csv(std::ostream& os, const std::vector<CheckRecord>& records) {
  os << "suite,case,lhs,rhs,gap,equality_expected,pass\n";
  for (const CheckRecord& r : records)
    os << r.suite << ',' << r.case_id << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
       << format_double(r.gap) << ',' << (r.equality_expected() ? 1 : 0) << ',' << (r.pass ? 1 : 0) << '\n';
}

std::vector<CheckRecord> read_records_csv(std::istream& is) {
  std::vector<CheckRecord> out;
  std::string line;
  if (!std::getline(is, line) || line != "suite,case,lhs,rhs,gap,equality_expected,pass")
    throw InvalidArgument("record CSV: unexpected header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 7) throw InvalidArgument("record CSV: expected 7 columns");
    CheckRecord r;
    r.suite = cols[0];
    r.case_id = cols[1];
    try {
      r.lhs = std::stod(cols[2]);
      r.rhs = std::stod(cols[3]);
      r.gap = std::stod(cols[4]);
    } catch (const std::exception&) {
      throw InvalidArgument("record CSV: malformed number");
    }
    r.expect = cols[5] == "1" ? Expect::Equality : Expect::Inequality;
    r.pass = cols[6] == "1";
    r.asserted = r.case_id.rfind("exploratory/", 0) != 0;
    out.push_back(std::move(r));
  }
  return out;
}

void print_table(std::ostream& os, const std::vector<CheckRecord>& records) {
  std::size_t w = 4;
  for (const CheckRecord& r : records) w = std::max(w, r.suite.size() + r.case_id.size() + 1);
  os << std::left << std::setw(int(w)) << "case" << "  " << std::setw(14) << "lhs" << std::setw(14) << "rhs"
     << std::setw(12) << "gap" << "status\n";
  std::ostringstream line;
  for (const CheckRecord& r : records) {
    std::string status = r.pass ? "ok" : "FAIL";
    if (r.expect == Expect::Equality) status += " (eq)";
    if (r.expect == Expect::Negative) status += " (negative expected)";
    if (!r.asserted) status += " (exploratory)";
    os << std::left << std::setw(int(w)) << (r.suite + "/" + r.case_id) << "  " << std::setprecision(8)
       << std::setw(14) << r.lhs << std::setw(14) << r.rhs << std::setprecision(3) << std::setw(12) << r.gap
       << status << '\n';
  }
}

}  // namespace horocvx
