#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "horocvx/euclid.hpp"
#include "horocvx/flow.hpp"
#include "horocvx/io.hpp"
#include "horocvx/problems.hpp"
#include "horocvx/psum.hpp"
#include "horocvx/quermass.hpp"
#include "horocvx/util.hpp"
#include "horocvx/verify.hpp"

using namespace horocvx;

namespace {

struct Globals {
  std::string grid;
  std::string out;
  unsigned long long seed = 20240601;
  double tol = 1e-8;
  double eq_tol = 1e-6;
  bool exploratory = false;
};

// Writes text to --out (plus a manifest) or to stdout.
void emit(const Globals& g, RunManifest m, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw InvalidArgument("cannot write '" + g.out + "'");
  f << text;
  m.outputs.insert(m.outputs.begin(), g.out);
  m.seed = g.seed;
  write_manifest(g.out, m);
}

SupportField load_support(const std::string& path) {
  FieldFile f = read_field(path);
  if (f.kind == "euclid_support") throw InvalidArgument("'" + path + "' holds a Euclidean support function");
  return make_field(f.grid, std::move(f.values));
}

std::string field_text(const std::string& kind, const Grid& g, const ScalarField& v) {
  return field_to_json(kind, g, v).dump(1) + "\n";
}

RunManifest manifest(const std::string& cmd, json params, std::vector<std::string> inputs, const std::string& grid) {
  RunManifest m;
  m.command = cmd;
  m.parameters = std::move(params);
  m.inputs = std::move(inputs);
  m.grid = grid;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Horospherical convexity toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals G;
  app.add_option("--grid", G.grid, "Grid: s1:N or s2:LxM");
  app.add_option("--out", G.out, "Output file (default stdout); a manifest is written beside it");
  app.add_option("--seed", G.seed, "Random seed");
  app.add_option("--tol", G.tol, "Inequality tolerance (scaled)");
  app.add_option("--eq-tol", G.eq_tol, "Equality tolerance (scaled)");
  app.add_flag("--exploratory", G.exploratory, "Record conjectured inequalities without asserting them");

  int exit_code = 0;

  // mkfield
  auto* mk = app.add_subcommand("mkfield", "Build a support field file");
  bool mk_ball = false, mk_point = false, mk_random = false, mk_even = false;
  std::string mk_center = "origin", mk_spec;
  double mk_radius = 0.0;
  auto* mk_kind = mk->add_flag("--ball", mk_ball, "Geodesic ball");
  mk->add_flag("--point", mk_point, "Single point");
  mk->add_flag("--random", mk_random, "Random uniformly h-convex perturbed ball (uses --seed)");
  mk->add_flag("--even", mk_even, "With --random: origin-symmetric field");
  mk->add_option("--center", mk_center, "'origin' or comma-separated spatial coordinates x_1..x_{n+1}");
  mk->add_option("--radius", mk_radius, "Ball radius");
  mk->add_option("--spec", mk_spec, "JSON field description (polynomial, ball, ...)");
  (void)mk_kind;
  mk->callback([&] {
    if (G.grid.empty()) throw InvalidArgument("mkfield requires --grid");
    GridPtr g = parse_grid_spec(G.grid);
    json params = {{"ball", mk_ball}, {"point", mk_point}, {"random", mk_random}, {"even", mk_even},
                   {"center", mk_center}, {"radius", mk_radius}, {"spec", mk_spec}};
    if (int(mk_ball) + int(mk_point) + int(mk_random) + int(!mk_spec.empty()) != 1)
      throw InvalidArgument("mkfield needs exactly one of --ball, --point, --random, --spec");
    json center = mk_center == "origin" ? json("origin") : json::array();
    if (mk_center != "origin") {
      std::stringstream ss(mk_center);
      std::string c;
      while (std::getline(ss, c, ',')) center.push_back(std::stod(c));
    }
    ScalarField v;
    if (mk_ball) {
      if (!(mk_radius >= 0)) throw InvalidArgument("ball radius must be nonnegative");
      v = build_scalar({{"type", "ball"}, {"center", center}, {"radius", mk_radius}}, g);
    } else if (mk_point) {
      v = build_scalar({{"type", "point"}, {"center", center}}, g);
    } else if (mk_random) {
      std::mt19937_64 rng(G.seed);
      v = random_hconvex_field(g, rng, mk_even).phi;
    } else {
      try {
        v = build_scalar(json::parse(mk_spec), g);
      } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("malformed --spec JSON: ") + e.what());
      }
    }
    emit(G, manifest("mkfield", params, {}, g->describe()), field_text("support_field", *g, v));
  });

  // psum / dilate
  auto* ps = app.add_subcommand("psum", "Hyperbolic p-sum a K +_p b L");
  double ps_a = 1, ps_b = 1, ps_p = 1;
  std::string ps_K, ps_L;
  ps->add_option("-a", ps_a, "Coefficient of K")->required();
  ps->add_option("-b", ps_b, "Coefficient of L")->required();
  ps->add_option("-p", ps_p, "Exponent p > 0")->required();
  ps->add_option("K", ps_K, "Field file of K")->required();
  ps->add_option("L", ps_L, "Field file of L")->required();
  ps->callback([&] {
    SupportField K = load_support(ps_K), L = load_support(ps_L);
    PSumResult r = p_sum(ps_a, K, ps_p, ps_b, L);
    std::cerr << "convexity: " << to_string(r.convexity.cls) << " (min eig " << r.convexity.min_eig << ")\n";
    emit(G, manifest("psum", {{"a", ps_a}, {"b", ps_b}, {"p", ps_p}}, {ps_K, ps_L}, K.grid->describe()),
         field_text("support_field", *K.grid, r.field.phi));
  });

  auto* dl = app.add_subcommand("dilate", "Hyperbolic p-dilation a . K");
  double dl_a = 1, dl_p = 1;
  std::string dl_K;
  dl->add_option("-a", dl_a, "Dilation factor")->required();
  dl->add_option("-p", dl_p, "Exponent p > 0")->required();
  dl->add_option("K", dl_K, "Field file")->required();
  dl->callback([&] {
    SupportField K = load_support(dl_K);
    SupportField D = p_dilate(dl_a, dl_p, K);
    emit(G, manifest("dilate", {{"a", dl_a}, {"p", dl_p}}, {dl_K}, K.grid->describe()),
         field_text("support_field", *K.grid, D.phi));
  });

  // quermass / steiner / weighted
  auto* qm = app.add_subcommand("quermass", "Modified quermassintegrals");
  std::string qm_K;
  int qm_k = -1;
  qm->add_option("K", qm_K, "Field file")->required();
  qm->add_option("-k", qm_k, "Single index (default: all)");
  qm->callback([&] {
    SupportField K = load_support(qm_K);
    std::ostringstream os;
    os << "k,value,method,est_error\n";
    for (int k = 0; k <= K.n(); ++k) {
      if (qm_k >= 0 && k != qm_k) continue;
      QuermassReport r = modified_quermass(K, k);
      os << k << ',' << format_double(r.value) << ',' << r.method << ',' << format_double(r.est_error) << '\n';
    }
    emit(G, manifest("quermass", {{"k", qm_k}}, {qm_K}, K.grid->describe()), os.str());
  });

  auto* st = app.add_subcommand("steiner", "Steiner formula residuals at distance rho");
  std::string st_K;
  double st_rho = 0.5;
  st->add_option("K", st_K, "Field file")->required();
  st->add_option("--rho", st_rho, "Parallel distance");
  st->callback([&] {
    SupportField K = load_support(st_K);
    SteinerResult s = steiner_check(K, st_rho);
    WeightedSteinerResult w = weighted_steiner_check(K, st_rho);
    std::ostringstream os;
    os << "formula,k,residual\n";
    for (int k = 0; k <= K.n(); ++k) os << "modified," << k << ',' << format_double(s.residual[k]) << '\n';
    os << "classical_volume,0," << format_double(s.classical_k0) << '\n';
    os << "weighted,0," << format_double(std::abs(w.integral_form - w.closed_form)) << '\n';
    emit(G, manifest("steiner", {{"rho", st_rho}}, {st_K}, K.grid->describe()), os.str());
  });

  auto* wt = app.add_subcommand("weighted", "Weighted volume and S functional");
  std::string wt_K;
  wt->add_option("K", wt_K, "Field file")->required();
  wt->callback([&] {
    SupportField K = load_support(wt_K);
    json j = {{"weighted_volume", weighted_volume(K)}, {"S", S_functional(K)}};
    emit(G, manifest("weighted", json::object(), {wt_K}, K.grid->describe()), j.dump(1) + "\n");
  });

  // measure / kw / ballsolve / assumption-h
  auto* ms = app.add_subcommand("measure", "Density of the horospherical p-surface area measure");
  std::string ms_K;
  double ms_p = 0;
  int ms_k = 0;
  ms->add_option("K", ms_K, "Field file")->required();
  ms->add_option("-p", ms_p, "Exponent p")->required();
  ms->add_option("-k", ms_k, "Index k")->required();
  ms->callback([&] {
    SupportField K = load_support(ms_K);
    MeasureDensity m = measure_density(K, ms_p, ms_k);
    emit(G, manifest("measure", {{"p", ms_p}, {"k", ms_k}}, {ms_K}, K.grid->describe()),
         field_text("scalar_field", *K.grid, m.density));
  });

  auto* kw = app.add_subcommand("kw", "Kazdan-Warner type integrals");
  std::string kw_K, kw_f;
  int kw_k = 0;
  kw->add_option("K", kw_K, "Field file")->required();
  kw->add_option("--f", kw_f, "Prescribed function file (default: constant 1)");
  kw->add_option("-k", kw_k, "Index k");
  kw->callback([&] {
    SupportField K = load_support(kw_K);
    ScalarField f(K.size(), 1.0);
    std::vector<std::string> in{kw_K};
    if (!kw_f.empty()) {
      FieldFile ff = read_field(kw_f);
      if (!ff.grid->same_as(*K.grid)) throw InvalidArgument("f and K live on different grids");
      f = ff.values;
      in.push_back(kw_f);
    }
    KwResidual r = kw_residual(K, f, kw_k);
    json j = {{"coordinate", r.coordinate}, {"general", r.general}, {"general_norm", r.general_norm}};
    emit(G, manifest("kw", {{"k", kw_k}}, in, K.grid->describe()), j.dump(1) + "\n");
  });

  auto* bs = app.add_subcommand("ballsolve", "Constant solutions of the prescribed measure equation");
  int bs_n = 1, bs_k = 0;
  double bs_p = 0, bs_gamma = 1;
  bs->add_option("-n", bs_n, "Dimension n")->required();
  bs->add_option("-k", bs_k, "Index k")->required();
  bs->add_option("-p", bs_p, "Exponent p")->required();
  bs->add_option("--gamma", bs_gamma, "Constant gamma > 0")->required();
  bs->callback([&] {
    BallSolutionReport r = ball_solutions(bs_n, bs_k, bs_p, bs_gamma);
    json j = {{"case", r.theorem_case}, {"description", r.description}, {"roots", r.roots},
              {"gamma0", r.gamma0},     {"t0", r.t0},                   {"free_center", r.free_center},
              {"radius", r.radius},     {"residuals", r.residuals}};
    emit(G, manifest("ballsolve", {{"n", bs_n}, {"k", bs_k}, {"p", bs_p}, {"gamma", bs_gamma}}, {}, ""),
         j.dump(1) + "\n");
  });

  auto* ah = app.add_subcommand("assumption-h", "Check the convexity assumption on h = f^{-1/(n-k)}");
  std::string ah_f;
  int ah_k = 1;
  double ah_p = 0;
  ah->add_option("f", ah_f, "Prescribed function file")->required();
  ah->add_option("-k", ah_k, "Index k")->required();
  ah->add_option("-p", ah_p, "Exponent p")->required();
  ah->callback([&] {
    FieldFile ff = read_field(ah_f);
    AssumptionHReport r = check_assumption_h(ff.grid, ff.values, ah_k, ah_p);
    json j = {{"pass", r.pass}, {"regime", r.regime}, {"worst_node", r.worst_node},
              {"worst_eigenvalue", r.worst_eigenvalue}};
    emit(G, manifest("assumption-h", {{"k", ah_k}, {"p", ah_p}}, {ah_f}, ff.grid->describe()), j.dump(1) + "\n");
  });

  // flow
  auto* fl = app.add_subcommand("flow", "Run the normalized curvature flow");
  std::string fl_config, fl_terminal;
  fl->add_option("--config", fl_config, "Flow configuration JSON")->required();
  fl->add_option("--terminal", fl_terminal, "Write the terminal field here");
  fl->callback([&] {
    std::string base = std::filesystem::path(fl_config).parent_path().string();
    json cj = read_json_file(fl_config);
    FlowJob job = flow_job_from_json(cj, base);
    FlowResult r = run(job.cfg, job.initial);
    std::ostringstream os;
    write_trace_csv(os, r.trace);
    double jp_rise = 0;
    for (std::size_t i = 1; i < r.trace.size(); ++i)
      jp_rise = std::max(jp_rise, (r.trace[i].Jp - r.trace[i - 1].Jp) / std::max(1.0, std::abs(r.trace[i - 1].Jp)));
    std::cerr << "status: " << r.status << ", steps " << r.steps << ", rejections " << r.rejections
              << ", Wk drift " << std::abs(r.Wk_final - r.Wk0) << ", Jp max rise " << jp_rise << ", gamma " << format_double(r.gamma)
              << ", gamma variation " << r.gamma_variation << (r.assumption_ok ? "" : ", assumption on h violated")
              << '\n';
    RunManifest m = manifest("flow", cj, {fl_config}, job.grid->describe());
    if (!fl_terminal.empty()) {
      write_field(fl_terminal, "support_field", *job.grid, r.terminal.phi);
      m.outputs.push_back(fl_terminal);
    }
    emit(G, m, os.str());
    if (r.status == "convexity_lost") exit_code = 1;
  });

  // project
  auto* pj = app.add_subcommand("project", "Project to the Euclidean convex body (support function)");
  std::string pj_K;
  pj->add_option("K", pj_K, "Field file")->required();
  pj->callback([&] {
    SupportField K = load_support(pj_K);
    EuclideanSupport E = project(K);
    BridgeValue v = V_functional(K);
    std::cerr << "min eig(D2u + u I) " << euclid_min_eig(E) << ", V " << format_double(v.value)
              << ", cross-residual " << v.cross_residual << '\n';
    emit(G, manifest("project", json::object(), {pj_K}, K.grid->describe()),
         field_text("euclid_support", *E.grid, E.u));
  });

  // verify
  auto* vf = app.add_subcommand("verify", "Run inequality suites");
  std::string vf_suite = "all";
  vf->add_option("suite", vf_suite, "Suite name or 'all'");
  vf->callback([&] {
    SuiteOptions o;
    o.tol = G.tol;
    o.eq_tol = G.eq_tol;
    o.exploratory = G.exploratory;
    o.seed = G.seed;
    if (!G.grid.empty()) {
      GridPtr g = parse_grid_spec(G.grid);
      (g->n() == 1 ? o.s1_nodes : o.s2_polar) = g->resolution();
    }
    std::vector<CheckRecord> recs = run_suite(vf_suite, o);
    std::ostringstream csv;
    write_records_csv(csv, recs);
    if (G.out.empty()) {
      print_table(std::cout, recs);
    } else {
      emit(G,
           manifest("verify",
                    {{"suite", vf_suite}, {"tol", o.tol}, {"eq_tol", o.eq_tol}, {"exploratory", o.exploratory},
                     {"s1_nodes", o.s1_nodes}, {"s2_polar", o.s2_polar}},
                    {}, ""),
           csv.str());
    }
    std::size_t failed = 0;
    for (const CheckRecord& r : recs) failed += r.asserted && !r.pass;
    std::cerr << recs.size() << " records, " << failed << " failed\n";
    if (!all_pass(recs)) exit_code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
