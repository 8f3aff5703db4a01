#include "horocvx/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "horocvx/problems.hpp"
#include "horocvx/quermass.hpp"
#include "horocvx/util.hpp"

namespace horocvx {

void validate_config(const FlowConfig& cfg, const Grid& g, bool* assumption_ok) {
  const int n = g.n();
  if (cfg.k < 0 || cfg.k > n - 1) throw InvalidArgument("flow requires 0 <= k <= n-1");
  check_size(g, cfg.f);
  for (double v : cfg.f)
    if (!(v > 0) || !std::isfinite(v)) throw InvalidArgument("flow requires a positive f");
  if (cfg.eps_stop <= 0 || cfg.safety <= 0 || cfg.dt_max <= 0 || cfg.dt < 0)
    throw InvalidArgument("flow step parameters must be positive");
  if (cfg.enforce_even && even_error(g, cfg.f) > 1e-12 * (1 + *std::max_element(cfg.f.begin(), cfg.f.end())))
    throw InvalidArgument("evenness enforcement requires an even f");
  bool ok = true;
  if (cfg.k >= 1) {
    if (cfg.p < -n) throw InvalidArgument("flow with k >= 1 requires p >= -n");
    GridPtr gp = make_grid(n, g.resolution());
    ok = check_assumption_h(gp, cfg.f, cfg.k, cfg.p).pass;
    if (!ok && !cfg.assumption_warn_only) throw InvalidArgument("f violates the assumption on h");
  }
  if (assumption_ok) *assumption_ok = ok;
}

namespace {

struct Densities {
  ScalarField pA;  // p_{n-k}(A)
  double min_eig = 0.0;
};

Densities densities(const FlowConfig& cfg, const SupportField& K) {
  const int n = K.n();
  ATensorField A = a_tensor(K);
  Densities d;
  d.pA.resize(K.size());
  d.min_eig = *std::min_element(A.min_eig.begin(), A.min_eig.end());
  for (std::size_t i = 0; i < K.size(); ++i) d.pA[i] = p_elem(n, n - cfg.k, A.a[i]);
  return d;
}

double phi_from(const FlowConfig& cfg, const SupportField& K, const Densities& d) {
  const int n = K.n();
  const double m = n - cfg.k;
  ScalarField num(K.size()), den(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) {
    double phi = K.phi[i];
    num[i] = std::pow(phi, -1.0 - cfg.k) * std::pow(d.pA[i], 1.0 - 1.0 / m);
    den[i] = std::pow(cfg.f[i], -1.0 / m) * std::pow(phi, -cfg.k - (n + cfg.p) / m) * d.pA[i];
  }
  double D = K.grid->integrate(den);
  if (!(D > 0) || !std::isfinite(D)) throw DomainError("degenerate denominator in Phi");
  return K.grid->integrate(num) / D;
}

bool admissible(const ScalarField& phi) {
  for (double v : phi)
    if (!(v > 0) || !std::isfinite(v)) return false;
  return true;
}

double grid_spacing(const Grid& g) { return g.n() == 1 ? 2 * M_PI / g.resolution() : M_PI / g.resolution(); }

}  // namespace

double phi_global(const FlowConfig& cfg, const SupportField& K) {
  Densities d = densities(cfg, K);
  if (d.min_eig <= 0) throw DomainError("Phi requires a uniformly h-convex state");
  return phi_from(cfg, K, d);
}

ScalarField flow_velocity(const FlowConfig& cfg, const SupportField& K, double* Phi, double* min_eig) {
  const int n = K.n();
  const double m = n - cfg.k;
  Densities d = densities(cfg, K);
  if (min_eig) *min_eig = d.min_eig;
  if (d.min_eig <= 0) throw DomainError("state left the uniformly h-convex class");
  double ph = phi_from(cfg, K, d);
  if (Phi) *Phi = ph;
  ScalarField v(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) {
    double phi = K.phi[i];
    v[i] = ph * std::pow(phi, 1.0 - (n + cfg.p) / m) * std::pow(cfg.f[i], -1.0 / m) - std::pow(d.pA[i], -1.0 / m);
  }
  return v;
}

double suggested_dt(const FlowConfig& cfg, const SupportField& K) {
  if (cfg.dt > 0) return cfg.dt;
  const double m = K.n() - cfg.k;
  Densities d = densities(cfg, K);
  // The speed term linearizes to a diffusion with coefficient ~ p_{n-k}(A)^{-2/(n-k)}.
  double s = std::numeric_limits<double>::infinity();
  for (double v : d.pA) s = std::min(s, std::pow(std::max(v, 0.0), 1.0 / m));
  double h = grid_spacing(*K.grid);
  return std::min(cfg.dt_max, cfg.safety * s * s * h * h);
}

FlowState initial_state(const FlowConfig& cfg, const SupportField& phi0) {
  validate_config(cfg, *phi0.grid);
  FlowState s;
  s.phi = phi0;
  if (cfg.enforce_even) s.phi.phi = even_project(*phi0.grid, phi0.phi);
  ScalarField v = flow_velocity(cfg, s.phi, &s.Phi, &s.min_eig);
  for (double x : v) s.speed_sup = std::max(s.speed_sup, std::abs(x));
  return s;
}

StepOutcome step(const FlowConfig& cfg, const FlowState& s, double dt) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  const Grid& g = *s.phi.grid;
  const std::size_t N = s.phi.size();
  StepOutcome out;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt, dt *= 0.5) {
    try {
      auto shifted = [&](const ScalarField& k, double c) {
        ScalarField y = s.phi.phi;
        for (std::size_t i = 0; i < N; ++i) y[i] += c * k[i];
        if (!admissible(y)) throw DomainError("nonpositive support field");
        return SupportField{s.phi.grid, std::move(y)};
      };
      ScalarField k1 = flow_velocity(cfg, s.phi);
      ScalarField k2 = flow_velocity(cfg, shifted(k1, 0.5 * dt));
      ScalarField k3 = flow_velocity(cfg, shifted(k2, 0.5 * dt));
      ScalarField k4 = flow_velocity(cfg, shifted(k3, dt));
      ScalarField y = s.phi.phi;
      for (std::size_t i = 0; i < N; ++i) y[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      if (cfg.band_project) y = g.band_project(y);
      if (cfg.enforce_even) y = even_project(g, y);
      if (!admissible(y)) throw DomainError("nonpositive support field");
      FlowState ns;
      ns.t = s.t + dt;
      ns.phi = SupportField{s.phi.grid, std::move(y)};
      ScalarField v = flow_velocity(cfg, ns.phi, &ns.Phi, &ns.min_eig);
      for (double x : v) ns.speed_sup = std::max(ns.speed_sup, std::abs(x));
      out.state = std::move(ns);
      out.dt_used = dt;
      return out;
    } catch (const DomainError&) {
      ++out.rejections;
    }
  }
  throw DomainError("step rejected repeatedly: uniform h-convexity lost");
}

namespace {

TraceRecord record(const FlowConfig& cfg, const FlowState& s, double dt) {
  TraceRecord r;
  r.t = s.t;
  r.dt = dt;
  r.Wk = modified_quermass(s.phi, cfg.k).value;
  r.Jp = J_p(s.phi, cfg.f, cfg.p);
  r.minEigA = s.min_eig;
  r.maxGradRatio = max_grad_ratio(s.phi, analyze(s.phi));
  r.evenErr = even_error(*s.phi.grid, s.phi.phi);
  r.gammaVar = fit_gamma(s.phi, cfg.f, cfg.p, cfg.k).variation;
  r.speedSup = s.speed_sup;
  return r;
}

}  // namespace

FlowResult run(const FlowConfig& cfg, const SupportField& phi0) {
  FlowResult res;
  validate_config(cfg, *phi0.grid, &res.assumption_ok);
  if (convexity(phi0).cls != Convexity::Uniform) throw DomainError("initial field must be uniformly h-convex");
  FlowState s = initial_state(cfg, phi0);
  res.trace.push_back(record(cfg, s, 0.0));
  res.Wk0 = res.trace.front().Wk;
  res.status = "max_steps";
  double last_dt = 0;
  bool last_recorded = true;
  while (res.steps < cfg.max_steps) {
    if (s.speed_sup < cfg.eps_stop) {
      res.status = "converged";
      res.converged = true;
      break;
    }
    StepOutcome o;
    try {
      o = step(cfg, s, suggested_dt(cfg, s.phi));
    } catch (const DomainError&) {
      res.status = "convexity_lost";
      break;
    }
    s = std::move(o.state);
    last_dt = o.dt_used;
    res.rejections += o.rejections;
    ++res.steps;
    last_recorded = cfg.trace_every > 0 && res.steps % cfg.trace_every == 0;
    if (last_recorded) res.trace.push_back(record(cfg, s, last_dt));
  }
  if (!last_recorded) res.trace.push_back(record(cfg, s, last_dt));
  res.terminal = s.phi;
  res.Wk_final = res.trace.back().Wk;
  GammaFit gf = fit_gamma(s.phi, cfg.f, cfg.p, cfg.k);
  res.gamma = gf.gamma;
  res.gamma_variation = gf.variation;
  return res;
}

}  // namespace horocvx
