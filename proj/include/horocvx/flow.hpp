#pragma once

#include <string>
#include <vector>

#include "horocvx/hconvex.hpp"

namespace horocvx {

struct FlowConfig {
  int k = 0;
  double p = 0.0;
  ScalarField f;              // prescribed positive function on the grid
  double dt = 0.0;            // fixed step; 0 selects the diffusion-scaled policy
  double safety = 0.2;
  double dt_max = 0.05;
  double eps_stop = 1e-7;     // stop when sup |d phi/dt| falls below
  int max_steps = 200000;
  int max_retries = 12;
  bool enforce_even = true;
  bool band_project = true;
  bool assumption_warn_only = false;
  int trace_every = 1;
};

struct FlowState {
  double t = 0.0;
  SupportField phi;
  double Phi = 0.0;
  double speed_sup = 0.0;
  double min_eig = 0.0;
};

struct TraceRecord {
  double t = 0, dt = 0, Wk = 0, Jp = 0, minEigA = 0, maxGradRatio = 0, evenErr = 0, gammaVar = 0, speedSup = 0;
};

using FlowTrace = std::vector<TraceRecord>;

// Phi = int phi^{-1-k} p_{n-k}(A)^{1-1/(n-k)} / int f^{-1/(n-k)} phi^{-k-(n+p)/(n-k)} p_{n-k}(A).
double phi_global(const FlowConfig& cfg, const SupportField& K);

// d phi/dt at every node; also returns Phi and the smallest eigenvalue of A.
ScalarField flow_velocity(const FlowConfig& cfg, const SupportField& K, double* Phi = nullptr,
                          double* min_eig = nullptr);

double suggested_dt(const FlowConfig& cfg, const SupportField& K);

FlowState initial_state(const FlowConfig& cfg, const SupportField& phi0);

struct StepOutcome {
  FlowState state;
  double dt_used = 0.0;
  int rejections = 0;
};

// One RK4 step with Phi recomputed at every stage; halves dt when a stage
// leaves the uniformly h-convex class.
StepOutcome step(const FlowConfig& cfg, const FlowState& s, double dt);

struct FlowResult {
  SupportField terminal;
  double gamma = 0.0;
  double gamma_variation = 0.0;
  FlowTrace trace;
  bool converged = false;
  std::string status;  // "converged", "max_steps", "convexity_lost"
  int steps = 0;
  int rejections = 0;
  double Wk0 = 0.0;
  double Wk_final = 0.0;
  bool assumption_ok = true;
};

FlowResult run(const FlowConfig& cfg, const SupportField& phi0);

void validate_config(const FlowConfig& cfg, const Grid& g, bool* assumption_ok = nullptr);

}  // namespace horocvx
