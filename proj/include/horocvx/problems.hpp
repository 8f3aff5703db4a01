#pragma once

#include <string>
#include <vector>

#include "horocvx/hconvex.hpp"

namespace horocvx {

// Density phi^{-p-k} p_{n-k}(A[phi]) of the horospherical p-surface area measure.
struct MeasureDensity {
  double p = 0.0;
  int k = 0;
  ScalarField density;
};

MeasureDensity measure_density(const SupportField& K, double p, int k);

// (1/p) int phi_L^p phi_K^{-p-k} p_{n-k}(A[phi_K]) dsigma.
double mixed_quermass(const SupportField& K, const SupportField& L, double p, int k);

// (1/p) int f phi^p for p != 0, int f log phi for p = 0.
double J_p(const SupportField& K, const ScalarField& f, double p);

struct PdeResidual {
  ScalarField residual;  // phi^{-p-k} p_{n-k}(A) - gamma f
  double sup = 0.0;
};

PdeResidual pde_residual(const SupportField& K, const ScalarField& f, double p, int k, double gamma = 1.0);

// Best constant gamma (mean of the density ratio) and its relative spread.
struct GammaFit {
  double gamma = 0.0;
  double variation = 0.0;  // max |ratio - gamma| / gamma
};
GammaFit fit_gamma(const SupportField& K, const ScalarField& f, double p, int k);

struct KwResidual {
  std::vector<double> coordinate;  // int phi^{-n} <Df, Dx_i> dsigma, i = 1..n+1
  std::vector<double> general;     // int (Dphi/phi + z) phi^{-k} p_{n-k}(A) dsigma
  double general_norm = 0.0;
};

KwResidual kw_residual(const SupportField& K, const ScalarField& f, int k);

struct BallSolutionReport {
  int theorem_case = 0;  // 1..7
  std::string description;
  std::vector<double> roots;    // constant solutions phi = c
  double gamma0 = 0.0;          // only for p > n - 2k
  double t0 = 0.0;              // maximiser of zeta, p > n - 2k
  bool free_center = false;     // p = -n
  double radius = 0.0;          // p = -n: common radius of the family
  std::vector<double> residuals;  // |zeta(c) - gamma| / gamma per root
};

// zeta(c) = c^{-p-k} (c - 1/c)^{n-k} / 2^{n-k}.
double ball_zeta(int n, int k, double p, double c);
BallSolutionReport ball_solutions(int n, int k, double p, double gamma);

struct AssumptionHReport {
  bool pass = false;
  int regime = 0;  // 1..5
  std::size_t worst_node = 0;
  double worst_eigenvalue = 0.0;
};

AssumptionHReport check_assumption_h(GridPtr grid, const ScalarField& f, int k, double p);

}  // namespace horocvx
