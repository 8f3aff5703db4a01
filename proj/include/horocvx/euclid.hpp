#pragma once

#include "horocvx/hconvex.hpp"

namespace horocvx {

// Euclidean support function on S^n.
struct EuclideanSupport {
  GridPtr grid;
  ScalarField u;
};

// Smallest eigenvalue of D^2 u + u I over the nodes.
double euclid_min_eig(const EuclideanSupport& K);

// u = phi identically; D^2 phi + phi I = A[phi] + cosh r I.
EuclideanSupport project(const SupportField& K);

EuclideanSupport firey_sum(double a, const EuclideanSupport& K, double p, double b, const EuclideanSupport& L);

// sup |project(a K +_p b L) - (a project(K) +_p b project(L))|.
double commute_check(double a, const SupportField& K, double p, double b, const SupportField& L);

double euclid_volume(const EuclideanSupport& K);
// (1/(n+1)) int u_L^p u_K^{1-p} det(D^2 u_K + u_K I).
double euclid_mixed_volume_p(const EuclideanSupport& K, const EuclideanSupport& L, double p);

struct BridgeValue {
  double value = 0.0;           // Euclidean (bridge) evaluation
  double hyperbolic = 0.0;      // boundary-integral evaluation
  double cross_residual = 0.0;  // |value - hyperbolic|
};

BridgeValue V_functional(const SupportField& K);
BridgeValue V_p_functional(const SupportField& K, const SupportField& L, double p);

}  // namespace horocvx
