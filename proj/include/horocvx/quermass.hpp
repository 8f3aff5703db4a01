#pragma once

#include <string>
#include <vector>

#include "horocvx/hconvex.hpp"

namespace horocvx {

// Gauss-Legendre rule on [0, 1].
struct Rule01 {
  std::vector<double> t, w;
};
Rule01 gauss_legendre_01(int order);

// int_0^rho e^{a t} sinh^b t dt.
double exp_sinh_integral(double a, int b, double rho);

double I_k(int n, int k, double r);
double I_k_sup(int n, int k);
double I_k_inverse(int n, int k, double w);

double curvature_integral(const SupportField& K, int m);

struct QuermassReport {
  int k = 0;
  double value = 0.0;
  std::string method;
  double est_error = 0.0;
  int order = 0;  // t-quadrature order for the homotopy
};

// Homotopy along phi_t = 1 - t + t phi, order doubled until the k = n
// closed form is matched to 1e-9.
QuermassReport modified_quermass_homotopy(const SupportField& K, int k, int order = 32);
// W_n closed form (1/n) int (1 - phi^{-n}).
double quermass_closed_n(const SupportField& K);
// Homotopy for k < n, closed form for k = n.
QuermassReport modified_quermass(const SupportField& K, int k);

double k_mean_radius(const SupportField& K, int k);
double weighted_volume(const SupportField& K);
double S_functional(const SupportField& K);

struct SteinerResult {
  std::vector<double> residual;  // per k = 0..n
  double classical_k0 = 0.0;     // residual of the classical volume form
};

SteinerResult steiner_check(const SupportField& K, double rho);

struct WeightedSteinerResult {
  double integral_form = 0.0;
  double closed_form = 0.0;
};

WeightedSteinerResult weighted_steiner_check(const SupportField& K, double rho);

struct MinkowskiResiduals {
  std::vector<double> classical;  // m = 0..n-1
  std::vector<double> shifted;
};

MinkowskiResiduals minkowski_formula_residuals(const SupportField& K);

// Per-node curvature data used by the integral formulas.
struct CurvatureDensities {
  std::vector<double> phi, coshr, u_tilde;
  std::vector<std::array<double, 3>> pA;  // p_j(A[phi]), j = 0..n
  std::vector<std::array<double, 3>> sA;  // sigma_j(A[phi])
};
CurvatureDensities curvature_densities(const SupportField& K);

}  // namespace horocvx
